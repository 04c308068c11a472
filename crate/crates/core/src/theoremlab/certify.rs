//! Numeric certification of the fixing, pooling and approximation claims.
//!
//! Each claim is a list of checks. A check either bounds a worst-case gap
//! from above (an equality that should hold on every sampled profile) or
//! from below (an inequality certified on pinned witness profiles).
//! Profiles are replayed from seeds, so a report is reproducible.

use rayon::prelude::*;
use serde::Serialize;

use crate::agenda::{Agenda, Agent, Credence, Profile, WeightVector};
use crate::divergence::{bregman, Direction, Generator};
use crate::error::{Error, Result};
use crate::fixing::{fix_d1, fix_d2, fix_gkl, fix_sed};
use crate::oracle::{grid_minimize, Domain};
use crate::pooling::{
    agg_d1, agg_d2, dictator_select, geometric_objective, geometric_pool, geometric_pool_unnormalized,
    linear_pool,
};
use crate::wcap::{wcap_d1, wcap_d2};

use super::checks::{pool_after_fix, FixMethod, PoolMethod};
use super::random::{random_credence, random_profile, rng_for};
use super::section9::{run_section9, GP1_ROW, GP3_ROW, LP_ROW};

/// Claim identifiers and statements, in report order.
pub const CLAIMS: &[(&str, &str)] = &[
    ("prop1", "Euclidean fixing adds a constant and KL fixing rescales, in both directions"),
    ("prop2i", "linear pooling commutes with Euclidean fixing"),
    ("prop2ii", "linear pooling does not commute with KL fixing"),
    ("prop2iii", "geometric pooling commutes with KL fixing"),
    ("prop2iv", "geometric pooling does not commute with Euclidean fixing"),
    ("prop3", "Euclidean and second-direction KL aggregation are linear pooling; first-direction KL aggregation is unnormalized geometric pooling"),
    ("prop4", "geometric pooling is KL fixing of unnormalized geometric pooling"),
    ("prop5i", "Euclidean approximation equals pooling and fixing in either order"),
    ("prop5ii", "first-direction KL approximation equals geometric pooling and KL fixing in either order"),
    ("prop5iii", "second-direction KL approximation is the normalized linear pool, not the geometric pool"),
    ("prop5iv", "second-direction KL approximation is KL fixing after aggregation but not aggregation after fixing"),
    ("prop6", "the coherent minimizer of the geometric mean of divergences from coherent agents is an agent"),
    ("prop7", "the minimizer of the geometric mean of divergences is an agent"),
    ("thm8", "first-direction fixing moves an incoherent credence closer to every omniscient credence"),
    ("thm9", "first-direction approximation is fixing after linear pooling only for Euclidean divergence, and fixing around geometric pooling only for KL"),
    ("thm10", "first-direction approximation equals aggregation and fixing in either order"),
    ("agg1-unique", "first-direction aggregation is linear pooling only for Euclidean divergence and unnormalized geometric pooling only for KL"),
    ("thm11i", "second-direction approximation is fixing after linear pooling"),
    ("thm11ii", "on coherent agents, second-direction approximation also equals linear pooling after fixing"),
    ("thm11iii", "second-direction approximation commutes with linear pooling only for Euclidean divergence"),
    ("thm12", "second-direction aggregation is linear pooling"),
    ("sec9", "pooling on an agenda with a disjunction"),
    ("sed-boundary", "Euclidean fixing clips at zero outside the shift regime, where it stops commuting with linear pooling"),
    ("oracle", "closed-form and bisection solvers agree with brute-force grid minimization"),
];

/// Witness profiles replayed from seeds: `(seed, cells, agents)`, incoherent.
pub const WITNESS_SEEDS: &[(u64, usize, usize)] = &[(3, 3, 2), (17, 4, 3)];

/// Tolerance for equalities between closed forms and bisection solvers.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance for equalities certified through the generic solvers.
pub const SOLVER_TOL: f64 = 1e-6;
/// Minimum gap for a witness to certify an inequality.
pub const WITNESS_GAP: f64 = 1e-4;
/// Band for comparison with values reported to three decimals.
pub const TABLE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    /// Pass iff the worst gap is at most the tolerance.
    AtMost,
    /// Pass iff the smallest gap exceeds the tolerance.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub label: String,
    pub expect: Expect,
    pub tolerance: f64,
    /// Largest gap for `AtMost`, smallest for `Above`. `NaN` on error.
    pub value: f64,
    pub cases: usize,
    /// Sampled cases skipped because they lie outside the check's domain.
    pub excluded: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    fn new(label: &str, expect: Expect, tolerance: f64, value: f64, cases: usize) -> Self {
        let pass = match expect {
            Expect::AtMost => value <= tolerance,
            Expect::Above => value > tolerance,
        };
        CheckResult {
            label: label.to_string(),
            expect,
            tolerance,
            value,
            cases,
            excluded: 0,
            pass,
            witness: None,
            note: None,
        }
    }

    fn errored(label: &str, expect: Expect, tolerance: f64, err: &Error) -> Self {
        let mut r = CheckResult::new(label, expect, tolerance, f64::NAN, 0);
        r.note = Some(err.to_string());
        r
    }

    fn excluding(mut self, excluded: usize) -> Self {
        self.excluded = excluded;
        self
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub statement: String,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub seed: u64,
    pub seeds: usize,
    pub pass: bool,
    pub claims: Vec<ClaimResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyConfig {
    /// First seed of the sampled profiles.
    pub seed: u64,
    /// Profiles per combination of cell count and agent count.
    pub seeds: usize,
    pub dims: Vec<usize>,
    pub agents: Vec<usize>,
    /// Profiles per dimension for the grid-oracle checks.
    pub oracle_seeds: usize,
    /// Restrict to these claim ids; `None` runs everything.
    pub claims: Option<Vec<String>>,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            seed: 0,
            seeds: 100,
            dims: vec![2, 3, 4],
            agents: vec![2, 3],
            oracle_seeds: 10,
            claims: None,
        }
    }
}

/// Runs the selected claims. Claims run in parallel; the report lists them
/// in the order of [`CLAIMS`].
pub fn certify(config: &CertifyConfig) -> Result<CertificationReport> {
    if config.seeds == 0 || config.dims.is_empty() || config.agents.is_empty() {
        return Err(Error::Precondition("empty sampling configuration".into()));
    }
    if let Some(&m) = config.dims.iter().find(|&&m| !(2..=4).contains(&m)) {
        return Err(Error::Precondition(format!("cell count {m} outside 2..=4")));
    }
    if config.agents.contains(&0) {
        return Err(Error::Precondition("agent count must be positive".into()));
    }
    let selected: Vec<(&str, &str)> = match &config.claims {
        None => CLAIMS.to_vec(),
        Some(ids) => {
            if let Some(bad) = ids.iter().find(|id| !CLAIMS.iter().any(|(c, _)| c == id)) {
                return Err(Error::Precondition(format!("unknown claim '{bad}'")));
            }
            CLAIMS.iter().copied().filter(|(c, _)| ids.iter().any(|id| id == c)).collect()
        }
    };
    let lab = Lab::new(config);
    let claims: Vec<ClaimResult> = selected
        .par_iter()
        .map(|&(id, statement)| {
            let checks = lab.run(id);
            ClaimResult {
                id: id.to_string(),
                statement: statement.to_string(),
                pass: checks.iter().all(|c| c.pass),
                checks,
            }
        })
        .collect();
    Ok(CertificationReport {
        seed: config.seed,
        seeds: config.seeds,
        pass: claims.iter().all(|c| c.pass),
        claims,
    })
}

/// Amira and Benito on `{X, not X}`, weighted 0.4 and 0.6.
pub fn amira_benito() -> Profile {
    Profile::new(
        Agenda::labelled_partition(["X", "not X"]),
        vec![agent("Amira", vec![0.5, 0.1]), agent("Benito", vec![0.2, 0.6])],
        WeightVector::new(vec![0.4, 0.6]).expect("valid weights"),
    )
    .expect("fixed profile is valid")
}

/// A profile where the Euclidean fix of one agent clips a cell at zero.
pub fn clipped_shift_profile() -> Profile {
    Profile::new(
        Agenda::partition(3),
        vec![agent("a", vec![1.0, 1.0, 0.0]), agent("b", vec![0.0, 0.0, 1.0])],
        WeightVector::uniform(2),
    )
    .expect("fixed profile is valid")
}

fn agent(name: &str, values: Vec<f64>) -> Agent {
    Agent { name: name.into(), credence: Credence::new(values).expect("valid credence") }
}

pub struct Witness {
    pub name: String,
    pub profile: Profile,
}

/// Amira/Benito followed by the seeded profiles in [`WITNESS_SEEDS`].
pub fn witnesses() -> Vec<Witness> {
    let mut out = vec![Witness { name: "amira-benito".into(), profile: amira_benito() }];
    out.extend(WITNESS_SEEDS.iter().map(|&(seed, m, n)| Witness {
        name: format!("seed={seed},m={m},n={n}"),
        profile: random_profile(seed, m, n, false),
    }));
    out
}

/// True when the additive-shift fix stays inside `[0, 1]` for every agent
/// and for the linear pool.
pub fn in_shift_regime(profile: &Profile) -> bool {
    profile.credences().all(|c| shift_in_range(c)) && shift_in_range(&linear_pool(profile))
}

fn shift_in_range(c: &[f64]) -> bool {
    let k = (1.0 - c.iter().sum::<f64>()) / c.len() as f64;
    c.iter().all(|v| v + k >= 0.0)
}

/// `c + (1 − Σc)/m`, unclipped.
fn additive_shift(c: &[f64]) -> Vec<f64> {
    let k = (1.0 - c.iter().sum::<f64>()) / c.len() as f64;
    c.iter().map(|v| v + k).collect()
}

fn normalize(c: &[f64]) -> Vec<f64> {
    let s: f64 = c.iter().sum();
    c.iter().map(|v| v / s).collect()
}

fn gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, |acc, d| {
        if d.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(d)
        }
    })
}

/// Same divergence through the generic solvers.
fn numeric(gen: &Generator) -> Generator {
    Generator::affine_shifted(gen.clone(), 0.0, 0.0)
}

fn affine(gen: Generator) -> Generator {
    Generator::affine_shifted(gen, 0.7, -0.2)
}

fn pow(p: f64) -> Generator {
    Generator::Power(p)
}

fn fix1(gen: &Generator, agenda: &Agenda, c: &Credence) -> Result<Credence> {
    Ok(fix_d1(gen, agenda, c)?.argmin)
}

fn fix2(gen: &Generator, agenda: &Agenda, c: &Credence) -> Result<Credence> {
    Ok(fix_d2(gen, agenda, c)?.argmin)
}

fn pool(method: PoolMethod, fix: FixMethod, p: &Profile) -> Result<Credence> {
    pool_after_fix(&method, &fix, p)
}

/// Optimality residual of `x` for `min_{x coherent} Σ_k α_k D(·)` on a
/// partition: the spread of the gradient over the support plus any
/// violation at zero cells, relative to the gradient scale.
pub fn kkt_residual(gen: &Generator, profile: &Profile, x: &[f64], direction: Direction) -> f64 {
    let g: Vec<f64> = (0..x.len())
        .map(|j| {
            profile
                .agents()
                .iter()
                .zip(profile.weights().values())
                .filter(|(_, &w)| w > 0.0)
                .map(|(a, &w)| {
                    let c = a.credence[j];
                    w * match direction {
                        Direction::From => gen.phi_prime(x[j]) - gen.phi_prime(c),
                        Direction::To if x[j] == c => 0.0,
                        Direction::To => gen.phi_double_prime(x[j]) * (x[j] - c),
                    }
                })
                .sum()
        })
        .collect();
    let support: Vec<f64> = g.iter().zip(x).filter(|(_, &v)| v > 1e-12).map(|(&gj, _)| gj).collect();
    if support.is_empty() {
        return f64::INFINITY;
    }
    let lo = support.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = support.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let clipped =
        g.iter().zip(x).filter(|(_, &v)| v <= 1e-12).map(|(&gj, _)| (lo - gj).max(0.0)).fold(0.0, f64::max);
    let scale = 1.0 + lo.abs().max(hi.abs());
    let sum_gap = (x.iter().sum::<f64>() - 1.0).abs();
    ((hi - lo) + clipped) / scale + sum_gap
}

struct Lab<'a> {
    config: &'a CertifyConfig,
    witnesses: Vec<Witness>,
}

impl<'a> Lab<'a> {
    fn new(config: &'a CertifyConfig) -> Self {
        Lab { config, witnesses: witnesses() }
    }

    fn run(&self, id: &str) -> Vec<CheckResult> {
        match id {
            "prop1" => self.prop1(),
            "prop2i" => self.prop2i(),
            "prop2ii" => self.prop2ii(),
            "prop2iii" => self.prop2iii(),
            "prop2iv" => self.prop2iv(),
            "prop3" => self.prop3(),
            "prop4" => self.prop4(),
            "prop5i" => self.prop5i(),
            "prop5ii" => self.prop5ii(),
            "prop5iii" => self.prop5iii(),
            "prop5iv" => self.prop5iv(),
            "prop6" => self.dictatorship(true),
            "prop7" => self.dictatorship(false),
            "thm8" => self.thm8(),
            "thm9" => self.thm9(),
            "thm10" => self.thm10(),
            "agg1-unique" => self.agg1_unique(),
            "thm11i" => self.thm11i(),
            "thm11ii" => self.thm11ii(),
            "thm11iii" => self.thm11iii(),
            "thm12" => self.thm12(),
            "sec9" => self.sec9(),
            "sed-boundary" => self.sed_boundary(),
            "oracle" => self.oracle(),
            _ => unreachable!("claim ids are validated"),
        }
    }

    // ----- sampling -----

    /// Every combination of seed, cell count and agent count.
    fn profiles(&self, coherent: bool) -> Vec<Profile> {
        let c = self.config;
        let mut out = Vec::new();
        for s in 0..c.seeds as u64 {
            for &m in &c.dims {
                for &n in &c.agents {
                    out.push(random_profile(c.seed + s, m, n, coherent));
                }
            }
        }
        out
    }

    /// `seeds` incoherent profiles in the shift regime per combination of
    /// cell count and agent count, scanning seeds upward; returns the
    /// profiles and the number of scanned profiles skipped.
    fn regime_profiles(&self) -> (Vec<Profile>, usize) {
        let c = self.config;
        let mut out = Vec::new();
        let mut skipped = 0;
        for &m in &c.dims {
            for &n in &c.agents {
                let mut found = 0;
                let mut seed = c.seed;
                while found < c.seeds && seed < c.seed + 10_000 * c.seeds as u64 {
                    let p = random_profile(seed, m, n, false);
                    seed += 1;
                    if in_shift_regime(&p) {
                        out.push(p);
                        found += 1;
                    } else {
                        skipped += 1;
                    }
                }
            }
        }
        (out, skipped)
    }

    /// `count` profiles cycling through the dimensions and agent counts.
    fn rotating_profiles(&self, count: usize, coherent: bool) -> Vec<Profile> {
        let c = self.config;
        (0..count)
            .map(|i| {
                let m = c.dims[i % c.dims.len()];
                let n = c.agents[(i / c.dims.len()) % c.agents.len()];
                random_profile(c.seed + i as u64, m, n, coherent)
            })
            .collect()
    }

    fn oracle_profiles(&self, m: usize) -> Vec<Profile> {
        (0..self.config.oracle_seeds as u64)
            .map(|s| random_profile(self.config.seed + 1000 + s, m, 2, false))
            .collect()
    }

    // ----- check builders -----

    /// Worst gap over `cases` must be at most `tol`.
    fn agree<F>(&self, label: &str, tol: f64, cases: &[Profile], f: F) -> CheckResult
    where
        F: Fn(&Profile) -> Result<f64> + Sync,
    {
        let gaps: Result<Vec<f64>> = cases.par_iter().map(&f).collect();
        match gaps {
            Ok(g) => CheckResult::new(label, Expect::AtMost, tol, worst(&g, true), cases.len()),
            Err(e) => CheckResult::errored(label, Expect::AtMost, tol, &e),
        }
    }

    /// Smallest value over `cases` must exceed `tol`.
    fn above<F>(&self, label: &str, tol: f64, cases: &[Profile], f: F) -> CheckResult
    where
        F: Fn(&Profile) -> Result<f64> + Sync,
    {
        let values: Result<Vec<f64>> = cases.par_iter().map(&f).collect();
        match values {
            Ok(v) => CheckResult::new(label, Expect::Above, tol, worst(&v, false), cases.len()),
            Err(e) => CheckResult::errored(label, Expect::Above, tol, &e),
        }
    }

    /// Every witness must show a gap above [`WITNESS_GAP`].
    fn differ<F>(&self, label: &str, f: F) -> CheckResult
    where
        F: Fn(&Profile) -> Result<f64>,
    {
        let mut gaps = Vec::new();
        for w in &self.witnesses {
            match f(&w.profile) {
                Ok(g) => gaps.push(g),
                Err(e) => return CheckResult::errored(label, Expect::Above, WITNESS_GAP, &e),
            }
        }
        let mut r = CheckResult::new(label, Expect::Above, WITNESS_GAP, worst(&gaps, false), gaps.len());
        let names: Vec<&str> = self.witnesses.iter().map(|w| w.name.as_str()).collect();
        r.witness = Some(names.join("; "));
        r
    }

    /// Grid-oracle agreement: `solver` against the lattice minimizer of
    /// `objective` over `domain`, within ten lattice spacings of the final
    /// refinement (and at least `floor`).
    fn grid<S, O>(
        &self,
        label: &str,
        cases: &[(Profile, Domain, f64)],
        floor: f64,
        solver: S,
        objective: O,
    ) -> CheckResult
    where
        S: Fn(&Profile) -> Result<Vec<f64>> + Sync,
        O: Fn(&Profile, &[f64]) -> f64 + Sync,
    {
        let run = |(p, domain, resolution): &(Profile, Domain, f64)| -> Result<(f64, f64)> {
            let found = solver(p)?;
            let min = grid_minimize(|x| objective(p, x), *domain, *resolution)?;
            Ok((gap(&found, &min.point), (10.0 * min.spacing).max(floor)))
        };
        let results: Result<Vec<(f64, f64)>> = cases.par_iter().map(run).collect();
        match results {
            Ok(r) => {
                let tol = r.iter().map(|t| t.1).fold(floor, f64::max);
                let value = worst(&r.iter().map(|t| t.0).collect::<Vec<_>>(), true);
                CheckResult::new(label, Expect::AtMost, tol, value, cases.len())
            }
            Err(e) => CheckResult::errored(label, Expect::AtMost, floor, &e),
        }
    }

    // ----- claims -----

    fn prop1(&self) -> Vec<CheckResult> {
        let agenda_of = |c: &Credence| Agenda::partition(c.len());
        let creds: Vec<Credence> =
            self.profiles(false).iter().flat_map(|p| p.credences().cloned().collect::<Vec<_>>()).collect();
        let (inside, outside): (Vec<Credence>, Vec<Credence>) =
            creds.iter().cloned().partition(|c| shift_in_range(c));
        let as_profiles = |cs: &[Credence]| -> Vec<Profile> {
            cs.iter()
                .map(|c| {
                    Profile::from_credences(agenda_of(c), vec![c.clone()], WeightVector::uniform(1))
                        .expect("single agent")
                })
                .collect()
        };
        let inside = as_profiles(&inside);
        let all = as_profiles(&creds);
        let only = |p: &Profile| p.agents()[0].credence.clone();
        let sed_gen = numeric(&Generator::Sed);
        let gkl_gen = numeric(&Generator::Gkl);
        vec![
            self.agree("euclidean fix is the additive shift, both directions", EXACT_TOL, &inside, |p| {
                let c = only(p);
                let a = p.agenda();
                let want = additive_shift(&c);
                Ok(gap(&fix_sed(a, &c)?, &want)
                    .max(gap(&fix1(&sed_gen, a, &c)?, &want))
                    .max(gap(&fix2(&sed_gen, a, &c)?, &want)))
            })
            .excluding(outside.len()),
            self.agree("kl fix is normalization, both directions", EXACT_TOL, &all, |p| {
                let c = only(p);
                let a = p.agenda();
                let want = normalize(&c);
                Ok(gap(&fix_gkl(a, &c)?, &want)
                    .max(gap(&fix1(&gkl_gen, a, &c)?, &want))
                    .max(gap(&fix2(&gkl_gen, a, &c)?, &want)))
            }),
        ]
    }

    fn prop2i(&self) -> Vec<CheckResult> {
        let (cases, skipped) = self.regime_profiles();
        vec![self
            .agree("LP after Fix_SED = Fix_SED after LP", EXACT_TOL, &cases, |p| {
                let left = pool(PoolMethod::Linear, FixMethod::Sed, p)?;
                let right = fix_sed(p.agenda(), &linear_pool(p))?;
                Ok(gap(&left, &right).max(gap(&right, &additive_shift(&linear_pool(p)))))
            })
            .excluding(skipped)
            .with_note("profiles drawn until each combination has the full count inside the shift regime")]
    }

    fn prop2ii(&self) -> Vec<CheckResult> {
        vec![self.differ("LP after Fix_GKL vs Fix_GKL after LP", |p| {
            let left = pool(PoolMethod::Linear, FixMethod::Gkl, p)?;
            let right = fix_gkl(p.agenda(), &linear_pool(p))?;
            Ok(gap(&left, &right))
        })]
    }

    fn prop2iii(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        vec![self.agree("GP after Fix_GKL = Fix_GKL after GP = normalized GP-", EXACT_TOL, &cases, |p| {
            let left = pool(PoolMethod::Geometric, FixMethod::Gkl, p)?;
            let right = fix_gkl(p.agenda(), &geometric_pool(p)?)?;
            let formula = normalize(&geometric_pool_unnormalized(p));
            Ok(gap(&left, &right).max(gap(&right, &formula)))
        })]
    }

    fn prop2iv(&self) -> Vec<CheckResult> {
        vec![self.differ("GP after Fix_SED vs Fix_SED after GP", |p| {
            let left = pool(PoolMethod::Geometric, FixMethod::Sed, p)?;
            let right = fix_sed(p.agenda(), &geometric_pool(p)?)?;
            Ok(gap(&left, &right))
        })]
    }

    fn prop3(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let grid_cases: Vec<(Profile, Domain, f64)> =
            self.oracle_profiles(2).into_iter().map(|p| (p, Domain::Box(2), 1e-3)).collect();
        vec![
            self.agree("Agg_SED = LP", EXACT_TOL, &cases, |p| {
                Ok(gap(&agg_d1(&numeric(&Generator::Sed), p)?, &linear_pool(p)))
            }),
            self.agree("Agg_GKL1 = GP-", EXACT_TOL, &cases, |p| {
                Ok(gap(&agg_d1(&numeric(&Generator::Gkl), p)?, &geometric_pool_unnormalized(p)))
            }),
            self.grid(
                "Agg_GKL2 = LP (grid oracle)",
                &grid_cases,
                1e-4,
                |p| Ok(linear_pool(p).into_vec()),
                |p, x| weighted_divergence(&Generator::Gkl, p, x, Direction::To),
            ),
        ]
    }

    fn prop4(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        vec![self.agree("GP = Fix_GKL after GP-", EXACT_TOL, &cases, |p| {
            Ok(gap(&geometric_pool(p)?, &fix_gkl(p.agenda(), &geometric_pool_unnormalized(p))?))
        })]
    }

    fn prop5i(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let (regime, skipped) = self.regime_profiles();
        let sed = Generator::Sed;
        let wcap = |p: &Profile| -> Result<Credence> { Ok(wcap_d1(&numeric(&sed), p)?.argmin) };
        vec![
            self.agree("WCAP_SED optimality residual", EXACT_TOL, &cases, |p| {
                Ok(kkt_residual(&sed, p, &wcap(p)?, Direction::From))
            }),
            self.agree("WCAP_SED = Fix_SED after LP = Fix_SED after Agg_SED", EXACT_TOL, &cases, |p| {
                let w = wcap(p)?;
                Ok(gap(&w, &fix_sed(p.agenda(), &linear_pool(p))?)
                    .max(gap(&w, &fix_sed(p.agenda(), &agg_d1(&sed, p)?)?)))
            }),
            self.agree("WCAP_SED = LP after Fix_SED = Agg_SED after Fix_SED", EXACT_TOL, &regime, |p| {
                let w = wcap(p)?;
                Ok(gap(&w, &pool(PoolMethod::Linear, FixMethod::Sed, p)?)
                    .max(gap(&w, &pool(PoolMethod::Agg(sed.clone(), Direction::From), FixMethod::Sed, p)?)))
            })
            .excluding(skipped)
            .with_note("restricted to the shift regime; see sed-boundary"),
        ]
    }

    fn prop5ii(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let gkl = Generator::Gkl;
        let wcap = |p: &Profile| -> Result<Credence> { Ok(wcap_d1(&numeric(&gkl), p)?.argmin) };
        vec![
            self.agree("WCAP_GKL1 optimality residual", EXACT_TOL, &cases, |p| {
                Ok(kkt_residual(&gkl, p, &wcap(p)?, Direction::From))
            }),
            self.agree(
                "WCAP_GKL1 = GP = GP after Fix_GKL = Fix_GKL after GP = Fix_GKL after Agg_GKL1",
                EXACT_TOL,
                &cases,
                |p| {
                    let w = wcap(p)?;
                    let a = p.agenda();
                    let gp = geometric_pool(p)?;
                    Ok(gap(&w, &gp)
                        .max(gap(&w, &pool(PoolMethod::Geometric, FixMethod::Gkl, p)?))
                        .max(gap(&w, &fix_gkl(a, &gp)?))
                        .max(gap(&w, &fix_gkl(a, &agg_d1(&gkl, p)?)?)))
                },
            ),
            self.agree("WCAP_GKL1 = Agg_GKL1 after Fix_GKL", EXACT_TOL, &cases, |p| {
                let left = pool(PoolMethod::Agg(gkl.clone(), Direction::From), FixMethod::Gkl, p)?;
                Ok(gap(&wcap(p)?, &left))
            })
            .with_note(
                "the aggregate of fixed agents is an unnormalized geometric mean and is generally incoherent",
            ),
        ]
    }

    fn prop5iii(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let gkl = Generator::Gkl;
        vec![
            self.agree("WCAP_GKL2 optimality residual", EXACT_TOL, &cases, |p| {
                Ok(kkt_residual(&gkl, p, &wcap_d2(&gkl, p)?.argmin, Direction::To))
            }),
            self.agree("WCAP_GKL2 = normalized LP", EXACT_TOL, &cases, |p| {
                Ok(gap(&wcap_d2(&gkl, p)?.argmin, &normalize(&linear_pool(p))))
            }),
            self.agree("GP after Fix_GKL = Fix_GKL after GP = GP", EXACT_TOL, &cases, |p| {
                let gp = geometric_pool(p)?;
                Ok(gap(&pool(PoolMethod::Geometric, FixMethod::Gkl, p)?, &gp)
                    .max(gap(&fix_gkl(p.agenda(), &gp)?, &gp)))
            }),
            self.differ("WCAP_GKL2 vs GP after Fix_GKL", |p| {
                Ok(gap(&wcap_d2(&gkl, p)?.argmin, &pool(PoolMethod::Geometric, FixMethod::Gkl, p)?))
            }),
        ]
    }

    fn prop5iv(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let gkl = Generator::Gkl;
        vec![
            self.agree("WCAP_GKL2 = Fix_GKL after Agg_GKL2", EXACT_TOL, &cases, |p| {
                Ok(gap(&wcap_d2(&gkl, p)?.argmin, &fix_gkl(p.agenda(), &agg_d2(&gkl, p))?))
            }),
            self.differ("WCAP_GKL2 vs Agg_GKL2 after Fix_GKL", |p| {
                let right = pool(PoolMethod::Agg(gkl.clone(), Direction::To), FixMethod::Gkl, p)?;
                Ok(gap(&wcap_d2(&gkl, p)?.argmin, &right))
            }),
        ]
    }

    /// Constrained (coherent agents, coherent minimizer) or unconstrained.
    fn dictatorship(&self, constrained: bool) -> Vec<CheckResult> {
        let cases = self.rotating_profiles(2 * self.config.seeds, constrained);
        let gens = [Generator::Sed, Generator::Gkl, pow(3.0)];
        let mut out = Vec::new();
        for gen in &gens {
            for dir in [Direction::From, Direction::To] {
                out.push(self.agree(
                    &format!("{gen} {dir}: objective is 0 at the selection and at every agent"),
                    0.0,
                    &cases,
                    |p| {
                        let sel = dictator_select(gen, p, constrained, dir)?;
                        if !sel.dictatorship {
                            return Ok(f64::INFINITY);
                        }
                        let mut worst = sel.objective;
                        for c in p.credences() {
                            worst = worst.max(geometric_objective(gen, p, c, dir)?);
                        }
                        Ok(worst)
                    },
                ));
                out.push(self.above(
                    &format!("{gen} {dir}: objective is positive away from the agents"),
                    0.0,
                    &cases,
                    |p| min_off_agent_objective(gen, p, dir, constrained),
                ));
            }
        }
        out
    }

    fn thm8(&self) -> Vec<CheckResult> {
        let count = 10 * self.config.seeds;
        let dims = &self.config.dims;
        let creds: Vec<Credence> = (0..count)
            .map(|i| {
                let mut rng = rng_for(self.config.seed + i as u64);
                random_credence(&mut rng, dims[i % dims.len()], false)
            })
            .collect();
        let (incoherent, coherent): (Vec<Credence>, Vec<Credence>) = creds.into_iter().partition(|c| {
            !Agenda::partition(c.len()).is_coherent(c, crate::agenda::DEFAULT_COHERENCE_TOL).unwrap_or(true)
        });
        [Generator::Sed, Generator::Gkl, pow(3.0)]
            .iter()
            .map(|gen| {
                let margins: Result<Vec<f64>> = incoherent
                    .par_iter()
                    .map(|c| Ok(super::checks::check_dominance(gen, c)?.margin))
                    .collect();
                let label = format!("{gen}: every omniscient credence is strictly closer after fixing");
                match margins {
                    Ok(m) => CheckResult::new(&label, Expect::Above, 0.0, worst(&m, false), m.len())
                        .excluding(coherent.len()),
                    Err(e) => CheckResult::errored(&label, Expect::Above, 0.0, &e),
                }
            })
            .collect()
    }

    fn thm9(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let mut out = Vec::new();
        let fix_lp = |gen: &Generator, p: &Profile| -> Result<f64> {
            let w = wcap_d1(gen, p)?.argmin;
            Ok(gap(&w, &fix1(gen, p.agenda(), &linear_pool(p))?))
        };
        let around_gp = |gen: &Generator, p: &Profile| -> Result<f64> {
            let w = wcap_d1(gen, p)?.argmin;
            let a = p.agenda();
            let after = fix1(gen, a, &geometric_pool(p)?)?;
            let before = pool(PoolMethod::Geometric, FixMethod::Bregman(gen.clone(), Direction::From), p)?;
            Ok(gap(&w, &after).max(gap(&w, &before)))
        };
        for gen in [numeric(&Generator::Sed), affine(Generator::Sed)] {
            out.push(
                self.agree(&format!("{gen}: WCAP_D1 = Fix_D1 after LP"), EXACT_TOL, &cases, |p| {
                    fix_lp(&gen, p)
                }),
            );
        }
        for gen in [pow(3.0), Generator::Gkl] {
            out.push(self.differ(&format!("{gen}: WCAP_D1 vs Fix_D1 after LP"), |p| fix_lp(&gen, p)));
        }
        for gen in [numeric(&Generator::Gkl), affine(Generator::Gkl)] {
            out.push(self.agree(
                &format!("{gen}: WCAP_D1 = Fix_D1 after GP = GP after Fix_D1"),
                EXACT_TOL,
                &cases,
                |p| around_gp(&gen, p),
            ));
        }
        for gen in [pow(3.0), Generator::Sed] {
            out.push(
                self.differ(&format!("{gen}: WCAP_D1 vs Fix_D1 and GP in either order"), |p| {
                    around_gp(&gen, p)
                }),
            );
        }
        out
    }

    fn thm10(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let (regime, skipped) = self.regime_profiles();
        let mut out = Vec::new();
        for gen in [Generator::Sed, Generator::Gkl, pow(3.0), pow(1.5)] {
            out.push(self.agree(&format!("{gen}: WCAP_D1 optimality residual"), SOLVER_TOL, &cases, |p| {
                Ok(kkt_residual(&gen, p, &wcap_d1(&gen, p)?.argmin, Direction::From))
            }));
            out.push(self.agree(&format!("{gen}: WCAP_D1 = Fix_D1 after Agg_D1"), SOLVER_TOL, &cases, |p| {
                Ok(gap(&wcap_d1(&gen, p)?.argmin, &fix1(&gen, p.agenda(), &agg_d1(&gen, p)?)?))
            }));
        }
        let agg_after_fix = |gen: &Generator, p: &Profile| -> Result<f64> {
            let left = pool(
                PoolMethod::Agg(gen.clone(), Direction::From),
                FixMethod::Bregman(gen.clone(), Direction::From),
                p,
            )?;
            Ok(gap(&wcap_d1(gen, p)?.argmin, &left))
        };
        out.push(
            self.agree("SED: WCAP_D1 = Agg_D1 after Fix_D1", SOLVER_TOL, &regime, |p| {
                agg_after_fix(&Generator::Sed, p)
            })
            .excluding(skipped)
            .with_note("restricted to the shift regime; see sed-boundary"),
        );
        for gen in [Generator::Gkl, pow(3.0)] {
            out.push(
                self.agree(&format!("{gen}: WCAP_D1 = Agg_D1 after Fix_D1"), SOLVER_TOL, &cases, |p| {
                    agg_after_fix(&gen, p)
                })
                .with_note("aggregating fixed agents shifts every cell by the same weighted constant, which does not restore the sum constraint"),
            );
        }
        out
    }

    fn agg1_unique(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let lp = |gen: &Generator, p: &Profile| Ok(gap(&agg_d1(gen, p)?, &linear_pool(p)));
        let gpm = |gen: &Generator, p: &Profile| Ok(gap(&agg_d1(gen, p)?, &geometric_pool_unnormalized(p)));
        let mut out = Vec::new();
        for gen in [numeric(&Generator::Sed), affine(Generator::Sed)] {
            out.push(self.agree(&format!("{gen}: Agg_D1 = LP"), EXACT_TOL, &cases, |p| lp(&gen, p)));
        }
        for gen in [pow(3.0), Generator::Gkl] {
            out.push(self.differ(&format!("{gen}: Agg_D1 vs LP"), |p| lp(&gen, p)));
        }
        for gen in [numeric(&Generator::Gkl), affine(Generator::Gkl)] {
            out.push(self.agree(&format!("{gen}: Agg_D1 = GP-"), EXACT_TOL, &cases, |p| gpm(&gen, p)));
        }
        for gen in [pow(3.0), Generator::Sed] {
            out.push(self.differ(&format!("{gen}: Agg_D1 vs GP-"), |p| gpm(&gen, p)));
        }
        out
    }

    fn thm11i(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let mut out = Vec::new();
        for gen in [Generator::Sed, Generator::Gkl, pow(3.0), pow(1.5)] {
            out.push(self.agree(&format!("{gen}: WCAP_D2 optimality residual"), SOLVER_TOL, &cases, |p| {
                Ok(kkt_residual(&gen, p, &wcap_d2(&gen, p)?.argmin, Direction::To))
            }));
            out.push(self.agree(&format!("{gen}: WCAP_D2 = Fix_D2 after LP"), SOLVER_TOL, &cases, |p| {
                Ok(gap(&wcap_d2(&gen, p)?.argmin, &fix2(&gen, p.agenda(), &linear_pool(p))?))
            }));
            out.push(self.grid(
                &format!("{gen}: WCAP_D2 against the grid oracle"),
                &self.simplex_grid_cases(),
                1e-4,
                |p| Ok(wcap_d2(&gen, p)?.argmin.into_vec()),
                |p, x| weighted_divergence(&gen, p, x, Direction::To),
            ));
        }
        out
    }

    fn thm11ii(&self) -> Vec<CheckResult> {
        let cases = self.profiles(true);
        [Generator::Sed, Generator::Gkl, pow(3.0), pow(1.5)]
            .iter()
            .map(|gen| {
                self.agree(
                    &format!("{gen}: WCAP_D2 = Fix_D2 after LP = LP after Fix_D2"),
                    SOLVER_TOL,
                    &cases,
                    |p| {
                        let w = wcap_d2(gen, p)?.argmin;
                        let before =
                            pool(PoolMethod::Linear, FixMethod::Bregman(gen.clone(), Direction::To), p)?;
                        Ok(gap(&w, &fix2(gen, p.agenda(), &linear_pool(p))?).max(gap(&w, &before)))
                    },
                )
            })
            .collect()
    }

    fn thm11iii(&self) -> Vec<CheckResult> {
        let cases = self.profiles(false);
        let (regime, skipped) = self.regime_profiles();
        let lp_after = |gen: &Generator, p: &Profile| -> Result<f64> {
            let w = wcap_d2(gen, p)?.argmin;
            Ok(gap(&w, &pool(PoolMethod::Linear, FixMethod::Bregman(gen.clone(), Direction::To), p)?))
        };
        let mut out = Vec::new();
        for gen in [numeric(&Generator::Sed), affine(Generator::Sed)] {
            out.push(self.agree(&format!("{gen}: WCAP_D2 = Fix_D2 after LP"), SOLVER_TOL, &cases, |p| {
                Ok(gap(&wcap_d2(&gen, p)?.argmin, &fix2(&gen, p.agenda(), &linear_pool(p))?))
            }));
            out.push(
                self.agree(&format!("{gen}: WCAP_D2 = LP after Fix_D2"), SOLVER_TOL, &regime, |p| {
                    lp_after(&gen, p)
                })
                .excluding(skipped)
                .with_note("restricted to the shift regime; see sed-boundary"),
            );
        }
        for gen in [pow(3.0), Generator::Gkl] {
            out.push(self.differ(&format!("{gen}: WCAP_D2 vs LP after Fix_D2"), |p| lp_after(&gen, p)));
        }
        out
    }

    fn thm12(&self) -> Vec<CheckResult> {
        let cases: Vec<(Profile, Domain, f64)> =
            self.oracle_profiles(2).into_iter().map(|p| (p, Domain::Box(2), 1e-3)).collect();
        [Generator::Sed, Generator::Gkl, pow(3.0), pow(1.5)]
            .iter()
            .map(|gen| {
                self.grid(
                    &format!("{gen}: Agg_D2 = LP (grid oracle)"),
                    &cases,
                    1e-4,
                    |p| Ok(agg_d2(gen, p).into_vec()),
                    |p, x| weighted_divergence(gen, p, x, Direction::To),
                )
            })
            .collect()
    }

    fn sec9(&self) -> Vec<CheckResult> {
        let table = match run_section9() {
            Ok(t) => t,
            Err(e) => return vec![CheckResult::errored("table", Expect::AtMost, TABLE_TOL, &e)],
        };
        let lp = gap(&table.lp1, &LP_ROW).max(gap(&table.lp2, &LP_ROW)).max(gap(&table.lp3, &LP_ROW));
        let gp2 = table.gp2_error.contains("non-partition");
        let general: Vec<Profile> = (0..self.config.seeds as u64)
            .map(|s| super::random::random_general_profile(self.config.seed + s, 2 + (s % 2) as usize))
            .collect();
        let mut gp2_check = CheckResult::new(
            "GP on the agenda itself is rejected",
            Expect::AtMost,
            0.0,
            if gp2 { 0.0 } else { 1.0 },
            1,
        );
        gp2_check.note = Some(table.gp2_error.clone());
        vec![
            CheckResult::new("LP1 = LP2 = LP3 = table row", Expect::AtMost, SOLVER_TOL, lp, 1),
            CheckResult::new("GP1 = table row", Expect::AtMost, TABLE_TOL, gap(&table.gp1, &GP1_ROW), 1),
            CheckResult::new("GP3 = table row", Expect::AtMost, TABLE_TOL, gap(&table.gp3, &GP3_ROW), 1),
            CheckResult::new("GP1 and GP3 differ", Expect::Above, TABLE_TOL, gap(&table.gp1, &table.gp3), 1),
            gp2_check,
            self.agree("LP1 = LP2 = LP3 on random agendas with disjunctions", SOLVER_TOL, &general, |p| {
                let lp2 = linear_pool(p);
                let lp1 = crate::wcap::pool_on_worlds(p, crate::wcap::WorldPool::Linear)?;
                let lp3 = crate::wcap::wcap_general(&Generator::Sed, p, Direction::From)?.argmin;
                Ok(gap(&lp1, &lp2).max(gap(&lp3, &lp2)))
            }),
        ]
    }

    fn sed_boundary(&self) -> Vec<CheckResult> {
        let p = clipped_shift_profile();
        let value = (|| -> Result<f64> {
            let left = pool(PoolMethod::Linear, FixMethod::Sed, &p)?;
            let right = fix_sed(p.agenda(), &linear_pool(&p))?;
            Ok(gap(&left, &right))
        })();
        let label = "LP after Fix_SED vs Fix_SED after LP with a clipped agent";
        let mut r = match value {
            Ok(v) => CheckResult::new(label, Expect::Above, WITNESS_GAP, v, 1),
            Err(e) => CheckResult::errored(label, Expect::Above, WITNESS_GAP, &e),
        };
        r.witness = Some("a=(1,1,0), b=(0,0,1), equal weights".into());
        let (_, skipped) = self.regime_profiles();
        let share = CheckResult::new(
            "sampled profiles outside the shift regime",
            Expect::Above,
            0.0,
            skipped as f64,
            skipped,
        );
        vec![r, share]
    }

    fn simplex_grid_cases(&self) -> Vec<(Profile, Domain, f64)> {
        let mut cases: Vec<(Profile, Domain, f64)> =
            self.oracle_profiles(2).into_iter().map(|p| (p, Domain::Simplex(2), 1e-4)).collect();
        cases.extend(self.oracle_profiles(3).into_iter().map(|p| (p, Domain::Simplex(3), 2e-3)));
        cases
    }

    fn oracle(&self) -> Vec<CheckResult> {
        let simplex = self.simplex_grid_cases();
        let boxes: Vec<(Profile, Domain, f64)> = self
            .oracle_profiles(2)
            .into_iter()
            .map(|p| (p, Domain::Box(2), 1e-3))
            .chain(self.oracle_profiles(3).into_iter().map(|p| (p, Domain::Box(3), 1e-2)))
            .collect();
        let single = |p: &Profile| -> Profile {
            Profile::from_credences(
                p.agenda().clone(),
                vec![p.agents()[0].credence.clone()],
                WeightVector::uniform(1),
            )
            .expect("single agent")
        };
        let mut out = Vec::new();
        for gen in [Generator::Sed, Generator::Gkl, pow(3.0), pow(1.5)] {
            out.push(self.grid(
                &format!("{gen}: Fix_D1"),
                &simplex,
                1e-4,
                |p| Ok(fix1(&gen, p.agenda(), &p.agents()[0].credence)?.into_vec()),
                |p, x| weighted_divergence(&gen, &single(p), x, Direction::From),
            ));
            out.push(self.grid(
                &format!("{gen}: Fix_D2"),
                &simplex,
                1e-4,
                |p| Ok(fix2(&gen, p.agenda(), &p.agents()[0].credence)?.into_vec()),
                |p, x| weighted_divergence(&gen, &single(p), x, Direction::To),
            ));
            out.push(self.grid(
                &format!("{gen}: WCAP_D1"),
                &simplex,
                1e-4,
                |p| Ok(wcap_d1(&gen, p)?.argmin.into_vec()),
                |p, x| weighted_divergence(&gen, p, x, Direction::From),
            ));
            out.push(self.grid(
                &format!("{gen}: Agg_D1"),
                &boxes,
                1e-4,
                |p| Ok(agg_d1(&gen, p)?.into_vec()),
                |p, x| weighted_divergence(&gen, p, x, Direction::From),
            ));
        }
        out
    }
}

/// `Σ_k α_k D(x, c_k)` or `Σ_k α_k D(c_k, x)`; `+∞` on shape errors.
pub fn weighted_divergence(gen: &Generator, profile: &Profile, x: &[f64], direction: Direction) -> f64 {
    let mut total = 0.0;
    for (a, &w) in profile.agents().iter().zip(profile.weights().values()) {
        if w == 0.0 {
            continue;
        }
        let d = match direction {
            Direction::From => bregman(gen, x, &a.credence),
            Direction::To => bregman(gen, &a.credence, x),
        };
        total += w * d.unwrap_or(f64::INFINITY);
    }
    total
}

/// Smallest geometric objective over test points that are not agents: the
/// linear pool and five random credences (coherent when `constrained`).
fn min_off_agent_objective(gen: &Generator, p: &Profile, dir: Direction, constrained: bool) -> Result<f64> {
    let m = p.agenda().num_propositions();
    let seed = p.credences().flat_map(|c| c.iter()).fold(0u64, |h, v| h.rotate_left(7) ^ v.to_bits());
    let mut rng = rng_for(seed);
    let mut points = vec![linear_pool(p)];
    points.extend((0..5).map(|_| random_credence(&mut rng, m, constrained)));
    let mut best = f64::INFINITY;
    for x in points {
        if p.credences().any(|c| c.max_gap(&x) < 1e-12) {
            continue;
        }
        best = best.min(geometric_objective(gen, p, &x, dir)?);
    }
    Ok(best)
}

/// Largest (`high = true`) or smallest value; `NaN` if any value is `NaN`.
fn worst(values: &[f64], high: bool) -> f64 {
    if values.iter().any(|v| v.is_nan()) {
        return f64::NAN;
    }
    let init = if high { f64::NEG_INFINITY } else { f64::INFINITY };
    let v = values.iter().copied().fold(init, |a, b| if high { a.max(b) } else { a.min(b) });
    if values.is_empty() {
        if high {
            0.0
        } else {
            f64::NAN
        }
    } else {
        v
    }
}
