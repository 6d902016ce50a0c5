//! Residual checks over whole structures, and the consolidated run that
//! certifies the library end to end.
//!
//! A [`Check`] passes exactly when its residual is zero. The per-structure
//! suites (`jacobi_checks`, `cocycle_checks`, ...) are what the command line
//! `verify` runs; [`run_report`] strings them together into the full suite.

use std::fmt::Display;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bialgebra::{
    adjoint_on_tensor2, alpha_family_13_table, alpha_family_d_lambda_table, coboundary, coboundary_table,
    cocycle_residuals, cojacobi_residual, cybe_residual, derive_cocycle_from_omega, homogeneous_kernel,
    pde_system_residuals, proportionality, r_from_lambda, r_from_phi, solve_r_from_cocycle, AlphaTable, Proportion,
    RMatrix, Tensor2, Tensor3,
};
use crate::error::{Error, Result};
use crate::jet::{compose_coeffs, jet_compose, jet_invert, JetElement};
use crate::phi::{phi_corollary1, phi_d_lambda, phi_from_pair, pde10_residual, PhiSeries};
use crate::poisson::{
    functional_eq8_residual, g3_example, inversion_residual_with, jacobi_all, lambda_from_mu, omega_from_lambda,
    omega_from_phi, omega_special, random_jet, LambdaTable, MultiplicativityChecker, MuSeq, OmegaTable,
    RelationMode, SeriesResidual,
};
use crate::poly::CoordPoly;
use crate::rational::{self, Rational};
use crate::series::{ScalarSeries, TruncSeries};

pub const DEFAULT_SEED: u64 = 20_240_611;

/// Sizes and seed for a report run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub cap: usize,
    /// Largest jet order on which multiplicativity is checked symbolically.
    pub symbolic_max: usize,
    /// Random sample points per structure when checking at points.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 8,
            cap: 12,
            symbolic_max: 6,
            samples: 50,
            seed: DEFAULT_SEED,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Precondition("the report needs N >= 3".into()));
        }
        if self.cap < 4 {
            return Err(Error::Precondition("the report needs a grade cap of at least 4".into()));
        }
        if self.symbolic_max == 0 {
            return Err(Error::Precondition("symbolic bound must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub indices: Vec<i64>,
    pub status: Status,
    /// Description of the nonzero residual, for failures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trusted_degree: Option<u32>,
}

impl Check {
    /// Passes iff `residual` is `None`.
    pub fn new(name: &str, indices: Vec<i64>, residual: Option<String>, trusted_degree: Option<u32>) -> Self {
        Check {
            name: name.to_string(),
            indices,
            status: if residual.is_none() { Status::Pass } else { Status::Fail },
            residual,
            trusted_degree,
        }
    }

    pub fn truth(name: &str, indices: Vec<i64>, ok: bool, why: impl FnOnce() -> String) -> Self {
        Check::new(name, indices, (!ok).then(why), None)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn label(&self) -> String {
        if self.indices.is_empty() {
            self.name.clone()
        } else {
            let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
            format!("{}[{}]", self.name, idx.join(","))
        }
    }

    fn from_error(name: &str, indices: Vec<i64>, e: &Error) -> Self {
        Check::new(name, indices, Some(format!("error: {e}")), None)
    }
}

/// One check standing for many: passes iff all of `items` pass, and
/// otherwise names the first failure.
pub fn summarize(name: &str, indices: Vec<i64>, items: &[Check], trusted_degree: Option<u32>) -> Check {
    let failed: Vec<&Check> = items.iter().filter(|c| !c.passed()).collect();
    let residual = failed.first().map(|c| {
        format!(
            "{} of {} failed; first {}: {}",
            failed.len(),
            items.len(),
            c.label(),
            c.residual.as_deref().unwrap_or("")
        )
    });
    Check::new(name, indices, residual, trusted_degree)
}

fn sort_checks(checks: &mut [Check]) {
    checks.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.indices.cmp(&b.indices)));
}

const MAX_SHOWN: usize = 4;

fn clip(s: String) -> String {
    const LIMIT: usize = 240;
    if s.len() <= LIMIT {
        return s;
    }
    let mut end = LIMIT;
    while !s.is_char_boundary(end) {
        end -= 1;
    }
    format!("{} ...", &s[..end])
}

fn poly_residual(p: &CoordPoly) -> Option<String> {
    (!p.is_zero()).then(|| clip(format!("{p} ({} terms)", p.len())))
}

fn list_residual<I, T: Display>(items: I, total: usize) -> Option<String>
where
    I: Iterator<Item = T>,
{
    if total == 0 {
        return None;
    }
    let shown: Vec<String> = items.take(MAX_SHOWN).map(|t| t.to_string()).collect();
    let more = if total > MAX_SHOWN { format!(" and {} more", total - MAX_SHOWN) } else { String::new() };
    Some(clip(format!("{}{more}", shown.join("; "))))
}

fn series_residual(s: &ScalarSeries) -> Option<String> {
    let nvars = s.nvars();
    let terms = s.terms().map(|(deg, c)| {
        let names = ["u", "v", "w"];
        let mono: Vec<String> = (0..nvars)
            .filter(|&k| deg[k] > 0)
            .map(|k| format!("{}^{}", names[k], deg[k]))
            .collect();
        let mono = if mono.is_empty() { "1".to_string() } else { mono.join(" ") };
        format!("[{mono}] {}", rational::format(c))
    });
    list_residual(terms, s.terms().count())
}

fn tensor2_residual(t: &Tensor2) -> Option<String> {
    let count = t.nonzero().count();
    list_residual(t.nonzero().map(|(i, j, v)| format!("({i},{j}) {}", rational::format(v))), count)
}

fn tensor3_residual(t: &Tensor3) -> Option<String> {
    let nz = t.terms().filter(|(_, v)| !v.is_zero());
    let count = t.terms().filter(|(_, v)| !v.is_zero()).count();
    list_residual(nz.map(|((a, b, c), v)| format!("({a},{b},{c}) {}", rational::format(v))), count)
}

fn table_diff(a: &OmegaTable, b: &OmegaTable) -> Option<String> {
    if a.n() != b.n() {
        return Some(format!("tables on G_{} and G_{}", a.n(), b.n()));
    }
    let diffs: Vec<(usize, usize)> = a
        .entries()
        .filter(|&(i, j, p)| p != b.get(i, j))
        .map(|(i, j, _)| (i, j))
        .collect();
    list_residual(diffs.iter().map(|(i, j)| format!("omega_{i}{j} differs")), diffs.len())
}

fn lambda_diff(a: &LambdaTable, b: &LambdaTable) -> Option<String> {
    let n = a.n().max(b.n()) as i64;
    let diffs: Vec<(i64, i64)> = (1..=n)
        .flat_map(|m| (m + 1..=n).map(move |k| (m, k)))
        .filter(|&(m, k)| a.get(m, k) != b.get(m, k))
        .collect();
    list_residual(diffs.iter().map(|(m, k)| format!("lambda_{m},{k} differs")), diffs.len())
}

// ---- per-structure suites -------------------------------------------------

/// Jacobi identity for every triple `j < k < l`.
pub fn jacobi_checks(omega: &OmegaTable) -> Vec<Check> {
    let trusted = Some(omega.n() as u32);
    jacobi_all(omega)
        .iter()
        .map(|((j, k, l), p)| Check::new("jacobi", vec![*j as i64, *k as i64, *l as i64], poly_residual(p), trusted))
        .collect()
}

/// Multiplicativity for every pair `i < j` in the `2N` variables.
pub fn multiplicativity_symbolic_checks(omega: &OmegaTable) -> Vec<Check> {
    let trusted = Some(omega.n() as u32);
    match MultiplicativityChecker::new(omega).symbolic_all() {
        Ok(all) => all
            .iter()
            .map(|((i, j), p)| Check::new("multiplicativity", vec![*i as i64, *j as i64], poly_residual(p), trusted))
            .collect(),
        Err(e) => vec![Check::from_error("multiplicativity", vec![], &e)],
    }
}

/// Multiplicativity at `samples` random pairs of points of `G_N`; one check
/// per sample, naming the failing pairs.
pub fn multiplicativity_sample_checks<R: Rng>(omega: &OmegaTable, samples: usize, rng: &mut R) -> Vec<Check> {
    let n = omega.n();
    let points: Vec<(JetElement, JetElement)> = (0..samples).map(|_| (random_jet(rng, n), random_jet(rng, n))).collect();
    let checker = MultiplicativityChecker::new(omega);
    points
        .par_iter()
        .enumerate()
        .map(|(s, (x, y))| match checker.at_point(x, y) {
            Ok(res) => {
                let bad: Vec<String> = res
                    .iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|((i, j), v)| format!("({i},{j}) {}", rational::format(v)))
                    .collect();
                Check::new(
                    "multiplicativity_sample",
                    vec![s as i64],
                    list_residual(bad.iter(), bad.len()),
                    Some(n as u32),
                )
            }
            Err(e) => Check::from_error("multiplicativity_sample", vec![s as i64], &e),
        })
        .collect()
}

/// Symbolic up to `symbolic_max`, at random points beyond.
pub fn multiplicativity_checks<R: Rng>(omega: &OmegaTable, symbolic_max: usize, samples: usize, rng: &mut R) -> Vec<Check> {
    if omega.n() <= symbolic_max {
        multiplicativity_symbolic_checks(omega)
    } else {
        multiplicativity_sample_checks(omega, samples, rng)
    }
}

pub fn pde10_check(phi: &PhiSeries) -> Check {
    let r = pde10_residual(phi);
    Check::new("pde10", vec![], series_residual(&r.series), Some(r.trusted_degree))
}

fn series_check(name: &str, indices: Vec<i64>, r: Result<SeriesResidual>) -> Check {
    match r {
        Ok(r) => Check::new(name, indices, series_residual(&r.series), Some(r.trusted_degree)),
        Err(e) => Check::from_error(name, indices, &e),
    }
}

/// The functional equation for the generating series at random pairs of
/// points of `G_n`.
pub fn eq8_checks<R: Rng>(phi: &PhiSeries, n: usize, samples: usize, rng: &mut R) -> Vec<Check> {
    let points: Vec<(JetElement, JetElement)> = (0..samples).map(|_| (random_jet(rng, n), random_jet(rng, n))).collect();
    points
        .par_iter()
        .enumerate()
        .map(|(s, (x, y))| series_check("eq8", vec![s as i64], functional_eq8_residual(phi, x, y)))
        .collect()
}

/// Inversion is anti-Poisson, at random points of `G_n`.
pub fn inversion_checks<R: Rng>(phi: &PhiSeries, n: usize, samples: usize, rng: &mut R) -> Vec<Check> {
    let points: Vec<JetElement> = (0..samples).map(|_| random_jet(rng, n)).collect();
    let omega = match omega_from_phi(phi, n) {
        Ok(w) => w,
        Err(e) => return vec![Check::from_error("inversion", vec![], &e)],
    };
    points
        .par_iter()
        .enumerate()
        .map(|(s, x)| series_check("inversion", vec![s as i64], inversion_residual_with(phi, &omega, x)))
        .collect()
}

/// The cocycle identity for `n < m`, `n + m <= cap`.
pub fn cocycle_checks(alpha: &AlphaTable) -> Vec<Check> {
    let trusted = Some(alpha.cap() as u32);
    cocycle_residuals(alpha)
        .iter()
        .map(|((n, m), t)| Check::new("cocycle", vec![*n as i64, *m as i64], tensor2_residual(t), trusted))
        .collect()
}

/// The co-Jacobi identity on each `e_n`, restricted to the cap.
pub fn cojacobi_checks(alpha: &AlphaTable) -> Vec<Check> {
    let cap = alpha.cap();
    (0..=cap)
        .into_par_iter()
        .map(|n| {
            let t = cojacobi_residual(alpha, n).restrict(cap);
            Check::new("cojacobi", vec![n as i64], tensor3_residual(&t), Some(cap as u32))
        })
        .collect()
}

pub fn cybe_check(r: &RMatrix) -> Check {
    Check::new("cybe", vec![], tensor3_residual(&cybe_residual(r)), Some(r.cap() as u32))
}

// ---- random inputs --------------------------------------------------------

pub fn rng_for(seed: u64, tag: &[u64]) -> ChaCha8Rng {
    let mut s = seed;
    for t in tag {
        s = s.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(t.wrapping_add(1));
    }
    ChaCha8Rng::seed_from_u64(s)
}

/// A small random rational `p/q` with `|p| <= 5`, `1 <= q <= 4`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rational::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn random_nonzero<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let v = random_rational(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// A random admissible sequence for `(d, n)`: random tail with
/// `mu_{d+1} != 0`, then the relation enforced.
pub fn random_mu<R: Rng>(rng: &mut R, d: usize, n: usize) -> Result<MuSeq> {
    let mut tail = vec![random_nonzero(rng)];
    tail.extend((1..n).map(|_| random_rational(rng)));
    Ok(MuSeq::from_tail(d, n, &tail)?.enforce_relation())
}

/// A random antisymmetric `r` with a handful of components.
pub fn random_r<R: Rng>(rng: &mut R, cap: usize) -> RMatrix {
    let mut r = Tensor2::zero(cap);
    let count = rng.gen_range(1..=5);
    for _ in 0..count {
        let i = rng.gen_range(0..cap);
        let j = rng.gen_range(i + 1..=cap);
        r.add_wedge(i, j, &random_nonzero(rng));
    }
    r
}

// ---- the consolidated run -------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedScalar {
    pub name: String,
    /// `None` when the tables compared are not proportional.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub criteria_passed: usize,
    pub criteria_failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: SuiteConfig,
    pub scalars: Vec<NamedScalar>,
    pub criteria: Vec<CriterionResult>,
    pub summary: Summary,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn criterion(&self, id: u32) -> Option<&CriterionResult> {
        self.criteria.iter().find(|c| c.id == id)
    }

    pub fn scalar(&self, name: &str) -> Option<&NamedScalar> {
        self.scalars.iter().find(|s| s.name == name)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Plain-text summary, one line per criterion, then each failing check.
    pub fn summary_text(&self) -> String {
        let mut out = format!("{} seed={}\n", self.version, self.config.seed);
        for c in &self.criteria {
            let ok = c.checks.iter().filter(|k| k.passed()).count();
            out += &format!(
                "criterion {:>2} {}: {} ({ok}/{} checks)\n",
                c.id,
                c.title,
                if c.passed { "PASS" } else { "FAIL" },
                c.checks.len()
            );
        }
        for s in &self.scalars {
            out += &format!("scalar {}: {}\n", s.name, s.value.as_deref().unwrap_or("not proportional"));
        }
        for c in self.criteria.iter().flat_map(|c| &c.checks).filter(|k| !k.passed()) {
            out += &format!("FAIL {}: {}\n", c.label(), c.residual.as_deref().unwrap_or(""));
        }
        out += &format!(
            "{} of {} checks passed, {} of {} criteria passed\n",
            self.summary.passed,
            self.summary.checks,
            self.summary.criteria_passed,
            self.criteria.len()
        );
        out
    }
}

/// The random classified structure behind several criteria: a sequence on
/// `G_{2N-1}` (so that its generating series has order `2N`) and the table
/// cut down to `G_N`.
struct Classified {
    d: usize,
    sample: usize,
    mu: MuSeq,
    lambda_big: LambdaTable,
    lambda: LambdaTable,
    omega: OmegaTable,
}

impl Classified {
    fn build(d: usize, sample: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        let mu = random_mu(rng, d, 2 * n - 1)?;
        let lambda_big = lambda_from_mu(&mu, RelationMode::Strict)?;
        let lambda = lambda_big.truncate(n);
        let omega = omega_from_lambda(&lambda);
        Ok(Classified {
            d,
            sample,
            mu,
            lambda_big,
            lambda,
            omega,
        })
    }

    fn idx(&self) -> Vec<i64> {
        vec![self.d as i64, self.sample as i64]
    }

    fn phi(&self) -> PhiSeries {
        self.lambda_big.to_phi()
    }
}

/// Finds `c` with `a = c b` entrywise.
pub fn omega_proportionality(a: &OmegaTable, b: &OmegaTable) -> Proportion {
    if a.n() != b.n() {
        return Proportion::NotProportional;
    }
    let mut c: Option<Rational> = None;
    for (i, j, pb) in b.entries() {
        let pa = a.get(i, j);
        match (pa.is_zero(), pb.is_zero()) {
            (true, true) => continue,
            (false, true) => return Proportion::NotProportional,
            _ => {}
        }
        let (mono, cb) = pb.terms().next().expect("nonzero polynomial");
        let here = pa.coeff(mono.exps()) / cb;
        if *pa != pb.scale(&here) {
            return Proportion::NotProportional;
        }
        match &c {
            None => c = Some(here),
            Some(prev) if *prev != here => return Proportion::NotProportional,
            _ => {}
        }
    }
    match c {
        None => Proportion::BothZero,
        Some(c) => Proportion::Scalar(c),
    }
}

/// One global scalar across a list of comparisons: the check passes iff
/// every comparison is `Scalar(c)` with the same `c`.
fn global_scalar(name: &str, comparisons: &[(Vec<i64>, Proportion)], scalars: &mut Vec<NamedScalar>) -> Check {
    let mut value: Option<Rational> = None;
    let mut bad = Vec::new();
    for (idx, p) in comparisons {
        match (p, &value) {
            (Proportion::Scalar(c), None) => value = Some(c.clone()),
            (Proportion::Scalar(c), Some(v)) if c == v => {}
            _ => bad.push(format!("{idx:?}: {p:?}")),
        }
    }
    let ok = bad.is_empty() && value.is_some();
    scalars.push(NamedScalar {
        name: name.to_string(),
        value: if ok { value.as_ref().map(rational::format) } else { None },
    });
    let residual = if value.is_none() && bad.is_empty() {
        Some("nothing to compare".to_string())
    } else {
        list_residual(bad.iter(), bad.len())
    };
    Check::new(&format!("scalar_{name}"), vec![], residual, None)
}

fn criterion(id: u32, title: &str, mut checks: Vec<Check>) -> CriterionResult {
    sort_checks(&mut checks);
    CriterionResult {
        id,
        title: title.to_string(),
        passed: !checks.is_empty() && checks.iter().all(Check::passed),
        checks,
    }
}

fn or_error(name: &str, indices: Vec<i64>, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| Check::from_error(name, indices, &e))
}

fn group_axioms(cfg: &SuiteConfig) -> Vec<Check> {
    let mut checks = Vec::new();

    // symbolic associativity on G_6 in 18 variables
    let n = 6;
    let nv = 3 * n;
    let block = |k: usize| -> Vec<CoordPoly> { (1..=n).map(|i| CoordPoly::coord(nv, k * n + i)).collect() };
    let (x, y, z) = (block(0), block(1), block(2));
    let xy_z = compose_coeffs(&compose_coeffs(&x, &y, n), &z, n);
    let x_yz = compose_coeffs(&x, &compose_coeffs(&y, &z, n), n);
    for k in 0..n {
        let mut diff = xy_z[k].clone();
        diff.add_scaled(&x_yz[k], &-Rational::one());
        checks.push(Check::new("associativity_symbolic", vec![k as i64 + 1], poly_residual(&diff), Some(n as u32)));
    }

    // random triples on G_10
    let n = 10;
    let mut rng = rng_for(cfg.seed, &[1]);
    let id = JetElement::identity(n);
    for s in 0..100 {
        let (a, b, c) = (random_jet(&mut rng, n), random_jet(&mut rng, n), random_jet(&mut rng, n));
        let idx = vec![s];
        let assoc = (|| -> Result<bool> {
            Ok(jet_compose(&jet_compose(&a, &b)?, &c)? == jet_compose(&a, &jet_compose(&b, &c)?)?)
        })();
        checks.push(match assoc {
            Ok(ok) => Check::truth("associativity_sample", idx.clone(), ok, || "(ab)c != a(bc)".into()),
            Err(e) => Check::from_error("associativity_sample", idx.clone(), &e),
        });
        let ai = jet_invert(&a);
        let inv = (|| -> Result<bool> { Ok(jet_compose(&a, &ai)? == id && jet_compose(&ai, &a)? == id) })();
        checks.push(match inv {
            Ok(ok) => Check::truth("inverse_sample", idx.clone(), ok, || "a a^-1 != e".into()),
            Err(e) => Check::from_error("inverse_sample", idx, &e),
        });
    }
    checks
}

fn classification(cfg: &SuiteConfig, structures: &[Classified]) -> Vec<Check> {
    structures
        .par_iter()
        .flat_map_iter(|s| {
            let idx = s.idx();
            let n = cfg.n;
            let mut out = vec![
                Check::new(
                    "relation",
                    idx.clone(),
                    s.mu.check_relation().err().map(|e| e.to_string()),
                    None,
                ),
                summarize("jacobi", idx.clone(), &jacobi_checks(&s.omega), Some(n as u32)),
            ];
            let small = or_error(
                "multiplicativity_symbolic",
                idx.clone(),
                s.omega
                    .truncate(cfg.symbolic_max.min(n))
                    .map(|w| summarize("multiplicativity_symbolic", idx.clone(), &multiplicativity_symbolic_checks(&w), Some(w.n() as u32))),
            );
            out.push(small);
            let mut rng = rng_for(cfg.seed, &[2, s.d as u64, s.sample as u64]);
            let sampled = multiplicativity_sample_checks(&s.omega, cfg.samples, &mut rng);
            out.push(summarize("multiplicativity_sample", idx, &sampled, Some(n as u32)));
            out
        })
        .collect()
}

fn route_equality(cfg: &SuiteConfig, structures: &[Classified]) -> Vec<Check> {
    structures
        .par_iter()
        .map(|s| {
            let idx = s.idx();
            match omega_from_phi(&s.phi(), cfg.n) {
                Ok(w) => Check::new("route_equality", idx, table_diff(&s.omega, &w), Some(cfg.n as u32)),
                Err(e) => Check::from_error("route_equality", idx, &e),
            }
        })
        .collect()
}

fn recursion_facts(cfg: &SuiteConfig, structures: &[Classified]) -> Vec<Check> {
    let n = cfg.n;
    let mut checks = Vec::new();
    for s in structures {
        let idx = s.idx();
        let bad: Vec<usize> = (1..=n)
            .filter(|&k| s.lambda.get(1, k as i64) != s.mu.mu(k))
            .collect();
        checks.push(Check::new(
            "first_row_is_mu",
            idx.clone(),
            list_residual(bad.iter().map(|k| format!("lambda_1,{k} != mu_{k}")), bad.len()),
            None,
        ));
        // the table built directly on G_N agrees with the cut-down one
        let direct = MuSeq::new(s.d, n, s.mu.values()[..n + s.d].to_vec())
            .and_then(|m| lambda_from_mu(&m, RelationMode::Strict));
        checks.push(match direct {
            Ok(t) => Check::new("truncation_consistent", idx, lambda_diff(&t, &s.lambda), None),
            Err(e) => Check::from_error("truncation_consistent", idx, &e),
        });
    }

    let mut rng = rng_for(cfg.seed, &[4]);
    for s in 0..3i64 {
        // d = 1: mu_3 is forced to zero
        let mut tail = vec![random_nonzero(&mut rng)];
        tail.extend((1..n).map(|_| random_rational(&mut rng)));
        tail[1] = random_nonzero(&mut rng);
        let check = (|| -> Result<Option<String>> {
            let mu = MuSeq::from_tail(1, n, &tail)?;
            let mut why = Vec::new();
            if mu.relation_index() != Some(3) {
                why.push(format!("relation fixes {:?}", mu.relation_index()));
            }
            if !mu.forced_value().is_zero() {
                why.push(format!("forced mu_3 = {}", rational::format(&mu.forced_value())));
            }
            if lambda_from_mu(&mu, RelationMode::Strict).is_ok() {
                why.push("strict mode accepted mu_3 != 0".into());
            }
            if !mu.enforce_relation().mu(3).is_zero() {
                why.push("enforced mu_3 != 0".into());
            }
            Ok((!why.is_empty()).then(|| why.join("; ")))
        })();
        checks.push(match check {
            Ok(r) => Check::new("d1_forces_mu3_zero", vec![s], r, None),
            Err(e) => Check::from_error("d1_forces_mu3_zero", vec![s], &e),
        });

        // d = 2: mu_5 = mu_4^2 / mu_3
        let mu3 = random_nonzero(&mut rng);
        let mu4 = random_nonzero(&mut rng);
        let expected = &mu4 * &mu4 / &mu3;
        let mut tail = vec![mu3, mu4];
        tail.extend((2..n).map(|_| random_rational(&mut rng)));
        tail[2] = &expected + rational::one();
        let check = (|| -> Result<Option<String>> {
            let mu = MuSeq::from_tail(2, n, &tail)?;
            let mut why = Vec::new();
            if mu.forced_value() != expected {
                why.push(format!(
                    "forced mu_5 = {}, mu_4^2/mu_3 = {}",
                    rational::format(&mu.forced_value()),
                    rational::format(&expected)
                ));
            }
            if lambda_from_mu(&mu, RelationMode::Strict).is_ok() {
                why.push("strict mode accepted a wrong mu_5".into());
            }
            lambda_from_mu(&mu.enforce_relation(), RelationMode::Strict)?;
            Ok((!why.is_empty()).then(|| why.join("; ")))
        })();
        checks.push(match check {
            Ok(r) => Check::new("d2_forces_mu5", vec![s], r, None),
            Err(e) => Check::from_error("d2_forces_mu5", vec![s], &e),
        });
    }
    checks
}

fn pde10_suite() -> Vec<Check> {
    const ORD: u32 = 14;
    let with_min = |mut c: Check, name: &str, idx: Vec<i64>| -> Check {
        c.name = name.to_string();
        c.indices = idx;
        if c.passed() && c.trusted_degree.unwrap_or(0) < 12 {
            c.status = Status::Fail;
            c.residual = Some(format!("trusted degree {:?} is below 12", c.trusted_degree));
        }
        c
    };
    let mut checks = Vec::new();
    for d in 1..=4u32 {
        let idx = vec![d as i64];
        checks.push(match phi_corollary1(d, ORD) {
            Ok(phi) => with_min(pde10_check(&phi), "pde10_corollary", idx),
            Err(e) => Check::from_error("pde10_corollary", idx, &e),
        });
    }
    for d in 1..=3u32 {
        for (k, lam) in [rational::one(), rational::ratio(-1, 2)].iter().enumerate() {
            let idx = vec![d as i64, k as i64];
            checks.push(match phi_d_lambda(d, lam, ORD) {
                Ok(phi) => with_min(pde10_check(&phi), "pde10_d_lambda", idx),
                Err(e) => Check::from_error("pde10_d_lambda", idx, &e),
            });
        }
        let idx = vec![d as i64];
        let mut f = vec![Rational::zero(); d as usize + 2];
        f[d as usize + 1] = rational::one();
        let f = TruncSeries::univariate(f, ORD);
        let g = TruncSeries::univariate(vec![Rational::zero(), -Rational::one()], ORD);
        checks.push(match phi_from_pair(&f, &g, d, &rational::one(), ORD) {
            Ok(phi) => with_min(pde10_check(&phi), "pde10_pair", idx),
            Err(e) => Check::from_error("pde10_pair", idx, &e),
        });
    }
    let idx = vec![];
    checks.push(
        match PhiSeries::from_upper(ORD, [(2, 3, rational::one()), (1, 4, rational::one())]) {
            Ok(phi) => {
                let r = pde10_residual(&phi);
                Check::truth("pde10_nonsolution_detected", idx, !r.is_zero(), || {
                    "residual vanished for a series that is not a solution".into()
                })
            }
            Err(e) => Check::from_error("pde10_nonsolution_detected", idx, &e),
        },
    );
    checks
}

fn inversion_suite(cfg: &SuiteConfig, structures: &[Classified]) -> Vec<Check> {
    let n = cfg.n;
    let ord = 2 * n as u32;
    let mut inputs: Vec<(Vec<i64>, Result<PhiSeries>)> = Vec::new();
    for d in 1..=2usize {
        inputs.push((vec![d as i64, 0], phi_corollary1(d as u32, ord)));
        if let Some(s) = structures.iter().find(|s| s.d == d) {
            inputs.push((vec![d as i64, 1], Ok(s.phi())));
        }
    }
    inputs
        .into_iter()
        .map(|(idx, phi)| match phi {
            Ok(phi) => {
                let mut rng = rng_for(cfg.seed, &[6, idx[0] as u64, idx[1] as u64]);
                let items = inversion_checks(&phi, n, 20, &mut rng);
                summarize("inversion", idx, &items, Some(n as u32))
            }
            Err(e) => Check::from_error("inversion", idx, &e),
        })
        .collect()
}

fn g3_suite() -> Vec<Check> {
    let g = g3_example();
    vec![
        summarize("jacobi", vec![], &jacobi_checks(&g), Some(3)),
        summarize("multiplicativity_symbolic", vec![], &multiplicativity_symbolic_checks(&g), Some(3)),
        // every table generated by a series is polynomial in the coordinates
        Check::truth("not_polynomial", vec![], !g.is_polynomial(), || {
            "the table is polynomial, so the scan does not rule out a generating series".into()
        }),
    ]
}

fn bialgebra_suite(cfg: &SuiteConfig, structures: &[Classified], scalars: &mut Vec<NamedScalar>) -> Vec<Check> {
    let cap = cfg.cap;
    let mut checks = Vec::new();

    let mut rng = rng_for(cfg.seed, &[8]);
    for s in 0..10i64 {
        let r = random_r(&mut rng, cap);
        let bad: Vec<usize> = (0..=cap).filter(|&n| coboundary(&r, n) != adjoint_on_tensor2(n, &r).table).collect();
        checks.push(Check::new(
            "adjoint_matches_formula",
            vec![s],
            list_residual(bad.iter().map(|n| format!("n={n}")), bad.len()),
            Some(cap as u32),
        ));
    }

    for s in structures {
        let mut c = cybe_check(&r_from_lambda(&s.lambda));
        c.name = "cybe_classified".into();
        c.indices = s.idx();
        checks.push(c);
    }

    // n, m up to cap - 2 on both sides
    let ccap = 2 * (cap - 2);
    let mut families: Vec<(String, Vec<i64>, Result<AlphaTable>)> = Vec::new();
    for d in 1..=3usize {
        families.push(("family_13".into(), vec![d as i64], alpha_family_13_table(d, ccap)));
    }
    for d in 2..=3usize {
        for (k, lam) in [rational::one(), rational::ratio(-1, 2)].iter().enumerate() {
            families.push(("family_d_lambda".into(), vec![d as i64, k as i64], alpha_family_d_lambda_table(d, lam, ccap)));
        }
    }
    let fam_checks: Vec<Check> = families
        .par_iter()
        .flat_map_iter(|(name, idx, a)| match a {
            Ok(a) => vec![
                summarize(&format!("cocycle_{name}"), idx.clone(), &cocycle_checks(a), Some(ccap as u32)),
                summarize(&format!("cojacobi_{name}"), idx.clone(), &cojacobi_checks(a), Some(ccap as u32)),
            ],
            Err(e) => vec![Check::from_error(&format!("cocycle_{name}"), idx.clone(), e)],
        })
        .collect();
    checks.extend(fam_checks);

    // normalizations of the explicit families against coboundaries
    let scap = 10;
    let r0d = |d: usize| Tensor2::from_upper(scap, [(0, d, rational::one())]);
    let mut c13 = Vec::new();
    let mut cdl = Vec::new();
    let mut c0 = Vec::new();
    for d in 1..=3usize {
        let idx = vec![d as i64];
        let p13 = (|| -> Result<Proportion> {
            Ok(proportionality(&alpha_family_13_table(d, scap)?, &coboundary_table(&r0d(d)?)))
        })();
        c13.push((idx.clone(), p13.unwrap_or(Proportion::NotProportional)));
        for (k, lam) in [rational::one(), rational::ratio(-1, 2)].iter().enumerate() {
            let p = (|| -> Result<Proportion> {
                let phi = phi_d_lambda(d as u32, lam, 2 * scap as u32 + 2)?;
                Ok(proportionality(&alpha_family_d_lambda_table(d, lam, scap)?, &coboundary_table(&r_from_phi(&phi, scap)?)))
            })();
            cdl.push((vec![d as i64, k as i64], p.unwrap_or(Proportion::NotProportional)));
        }
        let p0 = (|| -> Result<Proportion> {
            Ok(proportionality(
                &alpha_family_d_lambda_table(d, &Rational::zero(), scap)?,
                &alpha_family_13_table(d, scap)?,
            ))
        })();
        c0.push((idx, p0.unwrap_or(Proportion::NotProportional)));
    }
    checks.push(global_scalar("family_13_vs_coboundary_e0_ed", &c13, scalars));
    checks.push(global_scalar("family_d_lambda_vs_coboundary_of_phi", &cdl, scalars));
    checks.push(global_scalar("family_d_0_vs_family_13", &c0, scalars));
    checks
}

fn correspondence_suite(cfg: &SuiteConfig, structures: &[Classified], scalars: &mut Vec<NamedScalar>) -> Vec<Check> {
    let mut checks = Vec::new();

    // tables on G_{cap-1}, so the cochain has every index <= cap - 2
    let big = cfg.cap - 1;
    let mut rng = rng_for(cfg.seed, &[9]);
    let mut inputs = Vec::new();
    for d in 1..=3usize {
        for s in 0..3usize {
            inputs.push((d, s, random_mu(&mut rng, d, big)));
        }
    }
    let comparisons: Vec<(Vec<i64>, Proportion)> = inputs
        .par_iter()
        .map(|(d, s, mu)| {
            let idx = vec![*d as i64, *s as i64];
            let p = (|| -> Result<Proportion> {
                let mu = mu.as_ref().map_err(|e| Error::Precondition(e.to_string()))?;
                let lam = lambda_from_mu(mu, RelationMode::Strict)?;
                let alpha = derive_cocycle_from_omega(&omega_from_lambda(&lam))?;
                Ok(proportionality(&alpha, &coboundary_table(&r_from_lambda(&lam))))
            })();
            (idx, p.unwrap_or(Proportion::NotProportional))
        })
        .collect();
    checks.push(global_scalar("cocycle_from_omega_vs_coboundary", &comparisons, scalars));

    // sign of the explicit special family against the unit sequence
    let special: Vec<(Vec<i64>, Proportion)> = (1..=3usize)
        .map(|d| {
            let p = (|| -> Result<Proportion> {
                let lam = lambda_from_mu(&MuSeq::unit(d, cfg.n), RelationMode::Strict)?;
                Ok(omega_proportionality(&omega_special(d, cfg.n)?, &omega_from_lambda(&lam)))
            })();
            (vec![d as i64], p.unwrap_or(Proportion::NotProportional))
        })
        .collect();
    checks.push(global_scalar("special_family_vs_unit_mu", &special, scalars));

    let pde: Vec<Check> = structures
        .par_iter()
        .map(|s| {
            let alpha = coboundary_table(&r_from_lambda(&s.lambda));
            or_error(
                "pde_system",
                s.idx(),
                pde_system_residuals(&s.omega, &alpha).map(|all| {
                    let items: Vec<Check> = all
                        .iter()
                        .map(|((j, m, n), p)| {
                            Check::new("pde_system", vec![*j as i64, *m as i64, *n as i64], poly_residual(p), None)
                        })
                        .collect();
                    summarize("pde_system", s.idx(), &items, Some(cfg.n as u32))
                }),
            )
        })
        .collect();
    checks.extend(pde);

    for rep in homogeneous_kernel(cfg.cap - 2) {
        checks.push(Check::truth("homogeneous_kernel", vec![rep.bound as i64], rep.kernel_dim == 0, || {
            format!("kernel dimension {} with {} unknowns", rep.kernel_dim, rep.unknowns)
        }));
    }
    checks
}

fn solver_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let cap = cfg.cap;
    let mut rng = rng_for(cfg.seed, &[10]);
    let rs: Vec<RMatrix> = (0..10).map(|_| random_r(&mut rng, cap)).collect();
    let mut checks: Vec<Check> = rs
        .par_iter()
        .enumerate()
        .map(|(s, r)| {
            let idx = vec![s as i64];
            match solve_r_from_cocycle(&coboundary_table(r)) {
                Ok(rep) => {
                    let mut why = Vec::new();
                    if rep.r != *r {
                        why.push(format!("recovered r differs: {}", tensor2_residual(&rep.r.sub(r)).unwrap_or_default()));
                    }
                    if let Some(w) = rep.weights.iter().find(|w| w.kernel_dim != 0) {
                        why.push(format!("kernel dimension {} at weight {}", w.kernel_dim, w.weight));
                    }
                    Check::new("solve_r_round_trip", idx, (!why.is_empty()).then(|| why.join("; ")), Some(cap as u32))
                }
                Err(e) => Check::from_error("solve_r_round_trip", idx, &e),
            }
        })
        .collect();
    for d in 1..=3usize {
        let idx = vec![d as i64];
        let res = (|| -> Result<Option<String>> {
            let rep = solve_r_from_cocycle(&alpha_family_13_table(d, cap)?)?;
            // the family is -2 times the coboundary of e_0 ^ e_d
            let expected = Tensor2::from_upper(cap, [(0, d, rational::int(-2))])?;
            let mut why = Vec::new();
            if rep.r != expected {
                why.push(format!("recovered {:?}", tensor2_residual(&rep.r)));
            }
            for w in rep.weights.iter().filter(|w| w.weight <= cap as i64 && w.kernel_dim != 0) {
                why.push(format!("kernel dimension {} at weight {}", w.kernel_dim, w.weight));
            }
            Ok((!why.is_empty()).then(|| why.join("; ")))
        })();
        checks.push(match res {
            Ok(r) => Check::new("solve_r_family_13", idx, r, Some(cap as u32)),
            Err(e) => Check::from_error("solve_r_family_13", idx, &e),
        });
    }
    checks
}

pub const CRITERIA: [(u32, &str); 11] = [
    (1, "group axioms"),
    (2, "classification pipeline"),
    (3, "route equality"),
    (4, "recursion facts"),
    (5, "functional PDE"),
    (6, "inversion is anti-Poisson"),
    (7, "three-dimensional example"),
    (8, "bialgebra identities"),
    (9, "correspondence"),
    (10, "coboundary solver"),
    (11, "determinism"),
];

fn title(id: u32) -> &'static str {
    CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, t)| *t).unwrap_or("")
}

fn finish(config: SuiteConfig, mut scalars: Vec<NamedScalar>, criteria: Vec<CriterionResult>) -> Report {
    scalars.sort_by(|a, b| a.name.cmp(&b.name));
    let all: Vec<&Check> = criteria.iter().flat_map(|c| &c.checks).collect();
    let passed = all.iter().filter(|c| c.passed()).count();
    let criteria_passed = criteria.iter().filter(|c| c.passed).count();
    Report {
        version: format!("jetlie {}", env!("CARGO_PKG_VERSION")),
        config,
        scalars,
        summary: Summary {
            checks: all.len(),
            passed,
            failed: all.len() - passed,
            criteria_passed,
            criteria_failed: criteria.len() - criteria_passed,
        },
        criteria,
    }
}

/// Criteria 1 to 10 at the configured sizes. Deterministic given the
/// config.
pub fn run_report(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let cfg = config;
    let mut rng = rng_for(cfg.seed, &[2]);
    let mut structures = Vec::new();
    for d in 1..=3usize {
        for s in 0..3usize {
            structures.push((d, s, rng_for(cfg.seed, &[2, d as u64, s as u64, rng.gen()])));
        }
    }
    let structures: Vec<Classified> = structures
        .into_par_iter()
        .map(|(d, s, mut r)| Classified::build(d, s, cfg.n, &mut r))
        .collect::<Result<_>>()?;

    let mut scalars = Vec::new();
    let criteria = vec![
        criterion(1, title(1), group_axioms(cfg)),
        criterion(2, title(2), classification(cfg, &structures)),
        criterion(3, title(3), route_equality(cfg, &structures)),
        criterion(4, title(4), recursion_facts(cfg, &structures)),
        criterion(5, title(5), pde10_suite()),
        criterion(6, title(6), inversion_suite(cfg, &structures)),
        criterion(7, title(7), g3_suite()),
        criterion(8, title(8), bialgebra_suite(cfg, &structures, &mut scalars)),
        criterion(9, title(9), correspondence_suite(cfg, &structures, &mut scalars)),
        criterion(10, title(10), solver_suite(cfg)),
    ];
    Ok(finish(config.clone(), scalars, criteria))
}

/// [`run_report`] twice, with a final criterion recording whether the two
/// payloads are byte-identical. Returns the first run's report.
pub fn run_report_checked(config: &SuiteConfig) -> Result<Report> {
    let first = run_report(config)?;
    let second = run_report(config)?;
    let (a, b) = (first.to_json_string()?, second.to_json_string()?);
    let check = Check::truth("identical_payloads", vec![], a == b, || "two runs with the same seed differ".into());
    let mut criteria = first.criteria;
    criteria.push(criterion(11, title(11), vec![check]));
    Ok(finish(first.config, first.scalars, criteria))
}
