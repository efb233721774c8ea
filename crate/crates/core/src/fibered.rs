//! Fibered systems over a coordinate fibration: products `g x h`, skew
//! products with fiberwise maps parametrized by the base, and
//! block-triangular monomial systems. Computes relative degree sequences,
//! the pairing tables `a_{q,p}(n)`, `b_p(n)`, `c_p(n)`, and verifies the
//! product formula `d_p(f) = max_j d_j(g) d_{p-j}(f|pi)` together with
//! its corollaries, the power rule and log-concavity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{binomial, CohomologyClass, MultiProjSpace};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::monomial::{block_fibration, degree_sequence, dynamical_degrees_exact, ExponentMatrix};
use crate::mpoly::MPoly;
use crate::profile::{estimate_d1, ln_big, DegreeProfile, DegreeSequence, DegreeValue, SHADOW_EPS};
use crate::ratmap::ProjectiveRationalMap;

/// Iteration length used when estimating profiles of rational factors.
const ESTIMATE_ITERATES: usize = 12;

// ---------------------------------------------------------------------------
// Factors
// ---------------------------------------------------------------------------

/// One factor of a fibered system: a dominant self-map of `P^dim` with
/// whatever exact degree data its kind supports.
#[derive(Debug, Clone)]
pub enum FactorMap {
    Monomial(ExponentMatrix),
    Rational(ProjectiveRationalMap),
}

impl FactorMap {
    pub fn dim(&self) -> usize {
        match self {
            FactorMap::Monomial(a) => a.size(),
            FactorMap::Rational(f) => f.dimension(),
        }
    }

    pub fn as_monomial(&self) -> Option<&ExponentMatrix> {
        match self {
            FactorMap::Monomial(a) => Some(a),
            FactorMap::Rational(_) => None,
        }
    }

    /// The exact sequence `lambda_p(map^n)`, where the kind certifies it:
    /// every order for monomial factors (within caps), orders 0 and 1
    /// (and the top order on P^1) for rational factors.
    pub fn lambda_sequence(&self, p: usize, n_max: usize) -> Result<Vec<BigInt>> {
        let dim = self.dim();
        if p > dim {
            return Err(Error::InvalidInput(format!(
                "order {p} out of range for a factor on P^{dim}"
            )));
        }
        match self {
            FactorMap::Monomial(a) => Ok(degree_sequence(a, p, n_max)?.values().to_vec()),
            FactorMap::Rational(f) => {
                if p == 0 {
                    return Ok(vec![BigInt::one(); n_max]);
                }
                if p == 1 {
                    return Ok(f.degree_sequence_d1(n_max)?.values().to_vec());
                }
                Err(Error::Unsupported(format!(
                    "lambda_{p} of a general rational factor is not certified; \
                     only orders 0 and 1 are"
                )))
            }
        }
    }

    /// The dynamical degree profile: exact for monomial factors, exact at
    /// the endpoints plus an estimated `d_1` for rational factors on P^1.
    pub fn profile(&self) -> Result<DegreeProfile> {
        match self {
            FactorMap::Monomial(a) => dynamical_degrees_exact(a),
            FactorMap::Rational(f) => {
                if f.dimension() != 1 {
                    return Err(Error::Unsupported(
                        "full profiles of rational factors are certified only on P^1".into(),
                    ));
                }
                let seq = f.degree_sequence_d1(ESTIMATE_ITERATES)?;
                let est = estimate_d1(&seq)?;
                let profile = DegreeProfile::new(vec![
                    DegreeValue::ExactInt(BigInt::one()),
                    DegreeValue::Estimated {
                        value: est.estimate,
                        tol: est.tol,
                    },
                ]);
                Ok(profile)
            }
        }
    }

    /// Evaluates the factor at an integer projective point.
    fn eval_point(&self, point: &[BigInt]) -> Option<Vec<BigInt>> {
        match self {
            FactorMap::Monomial(a) => {
                ProjectiveRationalMap::from_exponent_matrix(a).eval_point(point)
            }
            FactorMap::Rational(f) => f.eval_point(point),
        }
    }

    fn check_dominant(&self) -> Result<()> {
        match self {
            FactorMap::Monomial(_) => Ok(()), // nonzero determinant by construction
            FactorMap::Rational(f) => {
                if f.is_dominant() {
                    Ok(())
                } else {
                    Err(Error::NotDominant)
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Systems
// ---------------------------------------------------------------------------

/// A product system `f(y, z) = (g(y), h(z))` on `P^l x P^m` fibered over
/// the first projection; the semi-conjugacy holds by construction.
#[derive(Debug, Clone)]
pub struct ProductSystem {
    base: FactorMap,
    fiber: FactorMap,
}

impl ProductSystem {
    pub fn new(base: FactorMap, fiber: FactorMap) -> Result<Self> {
        base.check_dominant()?;
        fiber.check_dominant()?;
        Ok(Self { base, fiber })
    }

    pub fn base(&self) -> &FactorMap {
        &self.base
    }

    pub fn fiber(&self) -> &FactorMap {
        &self.fiber
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber.dim()
    }

    pub fn total_dim(&self) -> usize {
        self.base.dim() + self.fiber.dim()
    }
}

/// A coordinate skew product `f(y, z) = (g(y), tau_y(z))` on `P^l x P^m`:
/// the fiber family has components polynomial in the base point.
#[derive(Debug, Clone)]
pub struct SkewSystem {
    base: FactorMap,
    fiber_dim: usize,
    /// `m + 1` polynomials in `y0..yl, z0..zm` (base variables first),
    /// homogeneous in each block with common block degrees.
    family: Vec<MPoly>,
    z_degree: u64,
}

impl SkewSystem {
    pub fn new(base: FactorMap, fiber_dim: usize, family: Vec<MPoly>) -> Result<Self> {
        base.check_dominant()?;
        let l = base.dim();
        let m = fiber_dim;
        if family.len() != m + 1 {
            return Err(Error::InvalidInput(format!(
                "fiber family needs {} components for P^{m}, got {}",
                m + 1,
                family.len()
            )));
        }
        let nvars = (l + 1) + (m + 1);
        let mut z_degree = None;
        let mut y_degree = None;
        for (i, comp) in family.iter().enumerate() {
            if comp.nvars() != nvars {
                return Err(Error::InvalidInput(format!(
                    "fiber component over {} variables, expected {nvars}",
                    comp.nvars()
                )));
            }
            if comp.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "fiber component {i} is identically zero"
                )));
            }
            let mut z_degs = std::collections::BTreeSet::new();
            let mut y_degs = std::collections::BTreeSet::new();
            for (exps, _) in comp.terms() {
                y_degs.insert(exps[..=l].iter().sum::<u64>());
                z_degs.insert(exps[l + 1..].iter().sum::<u64>());
            }
            if z_degs.len() != 1 || y_degs.len() != 1 {
                return Err(Error::Inhomogeneous { component: i });
            }
            let zd = *z_degs.iter().next().unwrap();
            let yd = *y_degs.iter().next().unwrap();
            match (z_degree, y_degree) {
                (None, None) => {
                    z_degree = Some(zd);
                    y_degree = Some(yd);
                }
                (Some(z0), Some(y0)) if z0 == zd && y0 == yd => {}
                _ => {
                    return Err(Error::MixedDegrees {
                        degrees: family
                            .iter()
                            .map(|c| c.total_degree().unwrap_or(0) as usize)
                            .collect(),
                    })
                }
            }
        }
        let z_degree = z_degree.expect("nonempty family");
        if z_degree == 0 {
            return Err(Error::InvalidInput(
                "fiber family must have positive degree in the fiber variables".into(),
            ));
        }
        Ok(Self {
            base,
            fiber_dim,
            family,
            z_degree,
        })
    }

    pub fn base(&self) -> &FactorMap {
        &self.base
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    /// Common degree of the family in the fiber variables.
    pub fn fiber_degree(&self) -> u64 {
        self.z_degree
    }

    /// The fiber map over a concrete base point, with the parameters
    /// substituted in; None when every component vanishes or degenerates.
    pub fn fiber_map_at(&self, point: &[BigInt]) -> Option<ProjectiveRationalMap> {
        let l = self.base.dim();
        let m = self.fiber_dim;
        let nvars = (l + 1) + (m + 1);
        // substitute y -> point, z -> fresh fiber variables
        let mut args = Vec::with_capacity(nvars);
        for c in point {
            args.push(MPoly::constant(m + 1, c.clone()));
        }
        for i in 0..=m {
            args.push(MPoly::var(m + 1, i));
        }
        let components: Vec<MPoly> = self.family.iter().map(|c| c.substitute(&args)).collect();
        if components.iter().any(|c| c.is_zero()) {
            return None;
        }
        ProjectiveRationalMap::new(m, components).ok()
    }

    /// When every family component is a single monomial, the z-exponent
    /// data is constant along orbits and the fiber topological degree is
    /// `|det E|` for the affine exponent matrix `E`.
    pub fn monomial_family_top_degree(&self) -> Option<BigInt> {
        let l = self.base.dim();
        let m = self.fiber_dim;
        let mut exps = Vec::with_capacity(m + 1);
        for comp in &self.family {
            if comp.num_terms() != 1 {
                return None;
            }
            let (e, _) = comp.terms().next().unwrap();
            exps.push(e[l + 1..].to_vec());
        }
        let rows: Vec<Vec<BigInt>> = (1..=m)
            .map(|i| {
                (1..=m)
                    .map(|j| BigInt::from(exps[i][j] as i64 - exps[0][j] as i64))
                    .collect()
            })
            .collect();
        let det = IntMatrix::from_rows(rows).ok()?.det();
        Some(det.abs())
    }
}

/// A block-lower-triangular monomial system: the exponent matrix splits
/// into the induced base matrix and the fiber block.
#[derive(Debug, Clone)]
pub struct TriangularSystem {
    matrix: ExponentMatrix,
    split: usize,
    base: ExponentMatrix,
    fiber: ExponentMatrix,
}

impl TriangularSystem {
    pub fn new(matrix: ExponentMatrix, split: usize) -> Result<Self> {
        let (base, fiber) = block_fibration(&matrix, split)?;
        Ok(Self {
            matrix,
            split,
            base,
            fiber,
        })
    }

    pub fn matrix(&self) -> &ExponentMatrix {
        &self.matrix
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn base_block(&self) -> &ExponentMatrix {
        &self.base
    }

    pub fn fiber_block(&self) -> &ExponentMatrix {
        &self.fiber
    }
}

/// Any of the supported fibered realizations.
#[derive(Debug, Clone)]
pub enum FiberedSystem {
    Product(ProductSystem),
    Skew(SkewSystem),
    MonomialTriangular(TriangularSystem),
}

impl FiberedSystem {
    pub fn base_dim(&self) -> usize {
        match self {
            FiberedSystem::Product(s) => s.base_dim(),
            FiberedSystem::Skew(s) => s.base_dim(),
            FiberedSystem::MonomialTriangular(s) => s.split(),
        }
    }

    pub fn fiber_dim(&self) -> usize {
        match self {
            FiberedSystem::Product(s) => s.fiber_dim(),
            FiberedSystem::Skew(s) => s.fiber_dim(),
            FiberedSystem::MonomialTriangular(s) => s.matrix().size() - s.split(),
        }
    }
}

// ---------------------------------------------------------------------------
// Relative sequences
// ---------------------------------------------------------------------------

/// The exact relative degrees `lambda_p(f^n | pi)` for `n = 1..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeSequence {
    pub order: usize,
    pub values: Vec<BigInt>,
    /// The base point used for orbit composition (skew systems only).
    pub base_point: Option<Vec<BigInt>>,
}

/// Relative sequence of a product system: the fiber factor's own degrees.
pub fn relative_sequence_product(
    sys: &ProductSystem,
    p: usize,
    n_max: usize,
) -> Result<RelativeSequence> {
    let values = sys.fiber.lambda_sequence(p, n_max)?;
    Ok(RelativeSequence {
        order: p,
        values,
        base_point: None,
    })
}

/// Relative sequence of a triangular system: the fiber block's degrees.
pub fn relative_sequence_triangular(
    sys: &TriangularSystem,
    p: usize,
    n_max: usize,
) -> Result<RelativeSequence> {
    let values = degree_sequence(sys.fiber_block(), p, n_max)?
        .values()
        .to_vec();
    Ok(RelativeSequence {
        order: p,
        values,
        base_point: None,
    })
}

const ORBIT_ATTEMPTS: usize = 5;

/// First-order relative degrees of a skew system by orbit composition:
/// `h_n = tau_{g^{n-1} y} o ... o tau_y`, with per-step degeneracy
/// detection and resampling of the base point.
pub fn relative_sequence_orbit(
    sys: &SkewSystem,
    n_max: usize,
    base_point: Option<Vec<BigInt>>,
    rng: &mut ChaCha8Rng,
) -> Result<RelativeSequence> {
    let l = sys.base.dim();
    let attempts = if base_point.is_some() {
        1
    } else {
        ORBIT_ATTEMPTS
    };
    let mut last_failed_step = 0usize;
    for _ in 0..attempts {
        let start = match &base_point {
            Some(y) => y.clone(),
            None => sample_projective_point(rng, l),
        };
        match orbit_compose(sys, n_max, &start) {
            Ok(values) => {
                return Ok(RelativeSequence {
                    order: 1,
                    values,
                    base_point: Some(start),
                })
            }
            Err(step) => last_failed_step = step,
        }
    }
    Err(Error::DegenerateOrbit {
        step: last_failed_step,
        attempts,
    })
}

fn sample_projective_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<BigInt> {
    loop {
        let point: Vec<BigInt> = (0..=dim)
            .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
            .collect();
        if point.iter().any(|c| !c.is_zero()) {
            return point;
        }
    }
}

/// Composes the fiber maps along the base orbit; on degeneracy returns the
/// failing step index.
fn orbit_compose(
    sys: &SkewSystem,
    n_max: usize,
    start: &[BigInt],
) -> std::result::Result<Vec<BigInt>, usize> {
    let mut values = Vec::with_capacity(n_max);
    let mut y = start.to_vec();
    let mut iterate: Option<ProjectiveRationalMap> = None;
    for step in 0..n_max {
        let tau = sys.fiber_map_at(&y).ok_or(step)?;
        let next = match &iterate {
            None => tau.gcd_reduce(),
            Some(h) => tau.compose(h).map_err(|_| step)?,
        };
        values.push(BigInt::from(next.degree()));
        iterate = Some(next);
        if step + 1 < n_max {
            y = sys.base.eval_point(&y).ok_or(step)?;
        }
    }
    Ok(values)
}

/// Base-point independence: orbit sequences over independently sampled
/// generic base points must agree exactly.
#[derive(Debug, Clone)]
pub struct YIndependenceReport {
    pub runs: Vec<RelativeSequence>,
    pub agree: bool,
}

pub fn verify_orbit_y_independence(
    sys: &SkewSystem,
    n_max: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<YIndependenceReport> {
    let mut runs = Vec::with_capacity(trials);
    for _ in 0..trials {
        runs.push(relative_sequence_orbit(sys, n_max, None, rng)?);
    }
    let agree = runs.windows(2).all(|w| w[0].values == w[1].values);
    Ok(YIndependenceReport { runs, agree })
}

// ---------------------------------------------------------------------------
// The a / b / c tables
// ---------------------------------------------------------------------------

/// The pairing quantities of a product system on `P^l x P^m`:
/// `a_{q,p}(n) = <(f^n)^*(omega^p), omega_Y^{l-p+q} ^ omega^{k-l-q}>`,
/// `b_p(n) = sum_q a_{q,p}(n)` and `c_p(n) = lambda_p(g^n)`.
#[derive(Debug, Clone)]
pub struct AbcTable {
    pub p: usize,
    /// Pairs `(q, values for n = 1..=N)` over the admissible q range.
    pub a: Vec<(usize, Vec<BigInt>)>,
    pub b: Vec<BigInt>,
    /// Present when `p <= l`.
    pub c: Option<Vec<BigInt>>,
}

/// The pullback class of `omega^p` under the n-th iterate of the product
/// map, in the Künneth basis: the factor degrees scale each basis class.
pub fn product_pullback_class(sys: &ProductSystem, p: usize, n: usize) -> Result<CohomologyClass> {
    let l = sys.base_dim();
    let m = sys.fiber_dim();
    let space = MultiProjSpace::new(vec![l, m])?;
    let mut g_seqs = std::collections::BTreeMap::new();
    let mut h_seqs = std::collections::BTreeMap::new();
    for a in p.saturating_sub(m)..=p.min(l) {
        g_seqs.insert(a, sys.base.lambda_sequence(a, n)?);
        h_seqs.insert(p - a, sys.fiber.lambda_sequence(p - a, n)?);
    }
    pullback_class(&space, p, &|a| g_seqs[&a][n - 1].clone(), &|b| {
        h_seqs[&b][n - 1].clone()
    })
}

fn pullback_class(
    space: &MultiProjSpace,
    p: usize,
    lambda_g: &dyn Fn(usize) -> BigInt,
    lambda_h: &dyn Fn(usize) -> BigInt,
) -> Result<CohomologyClass> {
    let l = space.factor_dims()[0];
    let m = space.factor_dims()[1];
    let mut terms = Vec::new();
    for a in p.saturating_sub(m)..=p.min(l) {
        let coeff = BigRational::from_integer(binomial(p, a) * lambda_g(a) * lambda_h(p - a));
        terms.push((vec![a, p - a], coeff));
    }
    CohomologyClass::from_terms(space, p, terms)
}

pub fn abc_sequences(sys: &ProductSystem, p: usize, n_max: usize) -> Result<AbcTable> {
    let l = sys.base_dim();
    let m = sys.fiber_dim();
    let k = l + m;
    if p > k {
        return Err(Error::InvalidInput(format!(
            "order {p} out of range on a {k}-dimensional product"
        )));
    }
    let space = MultiProjSpace::new(vec![l, m])?;
    // factor degree tables for every Künneth index of omega^p
    let mut g_seqs = std::collections::BTreeMap::new();
    let mut h_seqs = std::collections::BTreeMap::new();
    for a in p.saturating_sub(m)..=p.min(l) {
        g_seqs.insert(a, sys.base.lambda_sequence(a, n_max)?);
        h_seqs.insert(p - a, sys.fiber.lambda_sequence(p - a, n_max)?);
    }
    let q_min = p.saturating_sub(l);
    let q_max = p.min(m);
    let mut a_table: Vec<(usize, Vec<BigInt>)> = (q_min..=q_max)
        .map(|q| (q, Vec::with_capacity(n_max)))
        .collect();
    let mut b = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let class = pullback_class(&space, p, &|a| g_seqs[&a][n - 1].clone(), &|bq| {
            h_seqs[&bq][n - 1].clone()
        })?;
        let mut b_n = BigInt::zero();
        for (qi, q) in (q_min..=q_max).enumerate() {
            let base_exp = (l + q) - p; // q >= p - l keeps this nonnegative
            let base_power = CohomologyClass::from_terms(
                &space,
                base_exp,
                vec![(vec![base_exp, 0], BigRational::one())],
            )?;
            let omega_power = CohomologyClass::kahler(&space).pow(m - q)?;
            let paired = class.cup(&base_power)?.cup(&omega_power)?.integrate();
            debug_assert!(paired.is_integer());
            let value = paired.to_integer();
            b_n += &value;
            a_table[qi].1.push(value);
        }
        b.push(b_n);
    }
    let c = if p <= l {
        Some(sys.base.lambda_sequence(p, n_max)?)
    } else {
        None
    };
    Ok(AbcTable {
        p,
        a: a_table,
        b,
        c,
    })
}

/// `lambda_p(f^n)` of the product map on `P^l x P^m` itself: the mass of
/// the pullback class against the product Kähler form.
pub fn product_lambda_sequence(sys: &ProductSystem, p: usize, n_max: usize) -> Result<Vec<BigInt>> {
    let l = sys.base_dim();
    let m = sys.fiber_dim();
    let k = l + m;
    if p > k {
        return Err(Error::InvalidInput(format!(
            "order {p} out of range on a {k}-dimensional product"
        )));
    }
    let space = MultiProjSpace::new(vec![l, m])?;
    let mut g_seqs = std::collections::BTreeMap::new();
    let mut h_seqs = std::collections::BTreeMap::new();
    for a in p.saturating_sub(m)..=p.min(l) {
        g_seqs.insert(a, sys.base.lambda_sequence(a, n_max)?);
        h_seqs.insert(p - a, sys.fiber.lambda_sequence(p - a, n_max)?);
    }
    let kahler = CohomologyClass::kahler(&space);
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let class = pullback_class(&space, p, &|a| g_seqs[&a][n - 1].clone(), &|bq| {
            h_seqs[&bq][n - 1].clone()
        })?;
        let mass = class.mass(&kahler)?;
        debug_assert!(mass.is_integer());
        out.push(mass.to_integer());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Profiles of whole systems
// ---------------------------------------------------------------------------

/// The three profiles `(d(f), d(g), d(f|pi))` of a fibered system, each
/// computed by an independent route where one exists.
pub fn system_profiles(
    sys: &FiberedSystem,
) -> Result<(DegreeProfile, DegreeProfile, DegreeProfile)> {
    match sys {
        FiberedSystem::MonomialTriangular(t) => {
            let d_f = dynamical_degrees_exact(t.matrix())?;
            let d_g = dynamical_degrees_exact(t.base_block())?;
            let d_rel = dynamical_degrees_exact(t.fiber_block())?;
            Ok((d_f, d_g, d_rel))
        }
        FiberedSystem::Product(s) => {
            let d_g = s.base.profile()?;
            let d_rel = s.fiber.profile()?;
            let d_f = match (s.base.as_monomial(), s.fiber.as_monomial()) {
                (Some(a), Some(b)) => {
                    // independent route: the product of monomial maps is the
                    // monomial map of the block-diagonal matrix
                    let block = ExponentMatrix::new(IntMatrix::block_diag(a.matrix(), b.matrix()))?;
                    dynamical_degrees_exact(&block)?
                }
                _ => estimated_product_profile(s)?,
            };
            Ok((d_f, d_g, d_rel))
        }
        FiberedSystem::Skew(_) => Err(Error::Unsupported(
            "full profiles of skew systems are not certified; use relative \
             sequences at order 1"
                .into(),
        )),
    }
}

/// Estimated total profile of a product with at least one rational factor,
/// from the ratio estimator on the product's own lambda sequences.
fn estimated_product_profile(sys: &ProductSystem) -> Result<DegreeProfile> {
    let k = sys.total_dim();
    let mut values = Vec::with_capacity(k + 1);
    values.push(DegreeValue::ExactInt(BigInt::one()));
    for p in 1..=k {
        let seq = product_lambda_sequence(sys, p, ESTIMATE_ITERATES)?;
        let est = estimate_d1(&DegreeSequence::new(p, seq))?;
        values.push(DegreeValue::Estimated {
            value: est.estimate,
            tol: est.tol,
        });
    }
    Ok(DegreeProfile::new(values))
}

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// The estimation tolerance exceeds the gap between the two best
    /// candidate maxima, so no side can be confirmed.
    Indistinguishable,
}

#[derive(Debug, Clone)]
pub struct TheoremEntry {
    pub p: usize,
    pub verdict: Verdict,
    /// The maximizing index j.
    pub witness: usize,
    /// Every j within tie tolerance of the maximum.
    pub tied_witnesses: Vec<usize>,
    /// `| log d_p(f) - max_j (log d_j(g) + log d_{p-j}(f|pi)) |`.
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub entries: Vec<TheoremEntry>,
    pub holds: bool,
    /// `max_p d_p(f) >= max_p d_p(g)` within tolerance.
    pub max_degree_dominates: bool,
}

fn rel_tol(v: &DegreeValue) -> f64 {
    v.tolerance() / v.shadow().max(1.0)
}

/// Verifies the product formula against three profiles of consistent
/// lengths `(k, l, k - l)`.
pub fn verify_theorem_1_1(
    d_f: &DegreeProfile,
    d_g: &DegreeProfile,
    d_rel: &DegreeProfile,
) -> Result<TheoremReport> {
    let k = d_f.top_order();
    let l = d_g.top_order();
    let fiber = d_rel.top_order();
    if l + fiber != k {
        return Err(Error::ProfileLengthMismatch {
            total: k,
            base: l,
            relative: fiber,
        });
    }
    let all_exact = d_f.is_exact() && d_g.is_exact() && d_rel.is_exact();
    let mut entries = Vec::with_capacity(k + 1);
    let mut holds = true;
    for p in 0..=k {
        let lhs = d_f.value(p).shadow().ln();
        let j_min = p.saturating_sub(fiber);
        let j_max = p.min(l);
        let mut candidates: Vec<(usize, f64, f64)> = Vec::new();
        for j in j_min..=j_max {
            let g_v = d_g.value(j);
            let r_v = d_rel.value(p - j);
            let val = g_v.shadow().ln() + r_v.shadow().ln();
            candidates.push((j, val, rel_tol(g_v) + rel_tol(r_v)));
        }
        let (witness, best, best_tol) = candidates
            .iter()
            .cloned()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("nonempty candidate range");
        let residual = (lhs - best).abs();
        let tolerance = if all_exact {
            SHADOW_EPS
        } else {
            SHADOW_EPS + rel_tol(d_f.value(p)) + best_tol
        };
        let tied_witnesses: Vec<usize> = candidates
            .iter()
            .filter(|(_, v, _)| best - v <= SHADOW_EPS)
            .map(|(j, _, _)| *j)
            .collect();
        // second-best distinct candidate, for the indistinguishability guard
        let second_gap = candidates
            .iter()
            .filter(|(j, _, _)| !tied_witnesses.contains(j))
            .map(|(_, v, _)| best - v)
            .fold(f64::INFINITY, f64::min);
        let verdict = if residual <= tolerance {
            if !all_exact && second_gap.is_finite() && tolerance > second_gap {
                Verdict::Indistinguishable
            } else {
                Verdict::Holds
            }
        } else {
            Verdict::Fails
        };
        if verdict == Verdict::Fails {
            holds = false;
        }
        entries.push(TheoremEntry {
            p,
            verdict,
            witness,
            tied_witnesses,
            residual,
            tolerance,
        });
    }
    let max_f = d_f
        .shadows()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let max_g = d_g
        .shadows()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let max_degree_dominates = max_f >= max_g * (1.0 - 1e-9) - d_g.max_tolerance();
    Ok(TheoremReport {
        entries,
        holds,
        max_degree_dominates,
    })
}

/// Same-dimension semi-conjugacy check: the two profiles must be
/// identical (and, when both carry characteristic data, that data must
/// agree exactly).
#[derive(Debug, Clone)]
pub struct EqualityReport {
    pub equal: bool,
    pub max_abs_diff: f64,
    pub char_poly_equal: Option<bool>,
}

pub fn verify_corollary_1_2(left: &DegreeProfile, right: &DegreeProfile) -> Result<EqualityReport> {
    if left.top_order() != right.top_order() {
        return Err(Error::ProfileLengthMismatch {
            total: left.top_order(),
            base: right.top_order(),
            relative: 0,
        });
    }
    let char_poly_equal = match (left.char_poly(), right.char_poly()) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let tol = SHADOW_EPS + left.max_tolerance() + right.max_tolerance();
    let mut max_abs_diff = 0.0f64;
    for (a, b) in left.shadows().iter().zip(right.shadows()) {
        max_abs_diff = max_abs_diff.max((a - b).abs());
    }
    let equal = max_abs_diff <= tol && char_poly_equal != Some(false);
    Ok(EqualityReport {
        equal,
        max_abs_diff,
        char_poly_equal,
    })
}

/// Distinct-consecutive-degrees predicate: no two consecutive degrees are
/// equal within tolerance, which with log-concavity forces the strict
/// single-peak shape.
#[derive(Debug, Clone)]
pub struct DistinctnessReport {
    pub distinct: bool,
    pub first_plateau: Option<usize>,
}

pub fn consecutive_distinct(profile: &DegreeProfile) -> DistinctnessReport {
    let shadows = profile.shadows();
    for p in 0..shadows.len() - 1 {
        let tol = SHADOW_EPS + rel_tol(profile.value(p)) + rel_tol(profile.value(p + 1));
        let gap = (shadows[p + 1].ln() - shadows[p].ln()).abs();
        if gap <= tol {
            return DistinctnessReport {
                distinct: false,
                first_plateau: Some(p),
            };
        }
    }
    DistinctnessReport {
        distinct: true,
        first_plateau: None,
    }
}

#[derive(Debug, Clone)]
pub struct Corollary13Report {
    pub total: DistinctnessReport,
    pub base: DistinctnessReport,
    pub relative: DistinctnessReport,
    /// Whether `pred(f) => pred(g) and pred(f|pi)` holds.
    pub implication_holds: bool,
    /// True when the premise is false, making the implication vacuous.
    pub vacuous: bool,
}

pub fn verify_corollary_1_3(
    d_f: &DegreeProfile,
    d_g: &DegreeProfile,
    d_rel: &DegreeProfile,
) -> Corollary13Report {
    let total = consecutive_distinct(d_f);
    let base = consecutive_distinct(d_g);
    let relative = consecutive_distinct(d_rel);
    let vacuous = !total.distinct;
    let implication_holds = vacuous || (base.distinct && relative.distinct);
    Corollary13Report {
        total,
        base,
        relative,
        implication_holds,
        vacuous,
    }
}

/// Power rule check: `d_p(f^n) = d_p(f)^n` componentwise.
#[derive(Debug, Clone)]
pub struct PowerRuleEntry {
    pub p: usize,
    pub relative_residual: f64,
}

#[derive(Debug, Clone)]
pub struct PowerRuleReport {
    pub n: u64,
    pub entries: Vec<PowerRuleEntry>,
    pub holds: bool,
}

pub fn verify_power_rule(
    profile: &DegreeProfile,
    profile_of_power: &DegreeProfile,
    n: u64,
) -> Result<PowerRuleReport> {
    if profile.top_order() != profile_of_power.top_order() {
        return Err(Error::ProfileLengthMismatch {
            total: profile.top_order(),
            base: profile_of_power.top_order(),
            relative: 0,
        });
    }
    let mut entries = Vec::new();
    let mut holds = true;
    for p in 0..=profile.top_order() {
        let base = profile.value(p).shadow();
        let powered = profile_of_power.value(p).shadow();
        let expected = base.powi(n as i32);
        let relative_residual = (powered - expected).abs() / expected.max(f64::MIN_POSITIVE);
        let tol = SHADOW_EPS * n as f64
            + rel_tol(profile.value(p)) * n as f64
            + rel_tol(profile_of_power.value(p));
        if relative_residual > tol {
            holds = false;
        }
        entries.push(PowerRuleEntry {
            p,
            relative_residual,
        });
    }
    Ok(PowerRuleReport { n, entries, holds })
}

/// Convergence diagnostics for the pairing sums: `b_p(n)^{1/n}` against
/// the exact `d_p(f)`.
#[derive(Debug, Clone)]
pub struct Lemma42Report {
    pub p: usize,
    pub d_p: f64,
    pub b: Vec<BigInt>,
    /// `|b_p(n)^{1/n} - d_p|` for `n = 1..=N`.
    pub gaps: Vec<f64>,
    /// Whether the gap is nonincreasing from this 1-based index on.
    pub monotone_from: Option<usize>,
    /// Least-squares geometric decay rate of `b_p(n) / d_p^n` over the
    /// second half of the data.
    pub fitted_decay: Option<f64>,
}

pub fn verify_lemma_4_2(sys: &ProductSystem, p: usize, n_max: usize) -> Result<Lemma42Report> {
    let table = abc_sequences(sys, p, n_max)?;
    let d_g = sys.base.profile()?;
    let d_h = sys.fiber.profile()?;
    // product systems: d_p(f) = max_j d_j(g) d_{p-j}(h)
    let l = sys.base_dim();
    let m = sys.fiber_dim();
    let mut d_p = f64::NEG_INFINITY;
    for j in p.saturating_sub(m)..=p.min(l) {
        d_p = d_p.max(d_g.value(j).shadow() * d_h.value(p - j).shadow());
    }
    let ln_dp = d_p.ln();
    let gaps: Vec<f64> = table
        .b
        .iter()
        .enumerate()
        .map(|(i, b)| ((ln_big(b) / (i + 1) as f64).exp() - d_p).abs())
        .collect();
    let mut monotone_from = None;
    for start in 0..gaps.len() {
        if gaps[start..].windows(2).all(|w| w[1] <= w[0] + 1e-12) {
            monotone_from = Some(start + 1);
            break;
        }
    }
    // fit log(b(n)/d_p^n) ~ c + n log(rho) on the second half
    let half = gaps.len() / 2;
    let fitted_decay = if gaps.len() - half >= 2 {
        let points: Vec<(f64, f64)> = (half..gaps.len())
            .map(|i| {
                let n = (i + 1) as f64;
                (n, ln_big(&table.b[i]) - n * ln_dp)
            })
            .collect();
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|(x, _)| x).sum();
        let sy: f64 = points.iter().map(|(_, y)| y).sum();
        let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
        let denom = n * sxx - sx * sx;
        (denom.abs() > 1e-12).then(|| ((n * sxy - sx * sy) / denom).exp())
    } else {
        None
    };
    Ok(Lemma42Report {
        p,
        d_p,
        b: table.b,
        gaps,
        monotone_from,
        fitted_decay,
    })
}
