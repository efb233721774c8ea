//! Exact arithmetic in the bigraded cohomology ring of a product of
//! projective spaces `P^{n_1} x ... x P^{n_r}`.
//!
//! The ring is `Z[t_1, ..., t_r] / (t_i^{n_i + 1})` with `t_i` the
//! hyperplane class of the i-th factor, and the pairing is normalized so
//! that the top monomial `t_1^{n_1} ... t_r^{n_r}` integrates to 1.
//! Classes are sparse maps from exponent tuples to exact rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A product of projective spaces, given by its factor dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiProjSpace {
    factor_dims: Vec<usize>,
}

impl MultiProjSpace {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidInput(
                "a product space needs at least one factor".into(),
            ));
        }
        if factor_dims.contains(&0) {
            return Err(Error::InvalidInput(
                "every projective factor must have positive dimension".into(),
            ));
        }
        Ok(Self { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().sum()
    }
}

/// A bidegree-(p,p) cohomology class with exact rational coefficients over
/// the Künneth monomial basis. The zero class stores no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    space: MultiProjSpace,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, BigRational>,
}

impl CohomologyClass {
    /// The zero class of the given degree.
    pub fn zero(space: &MultiProjSpace, degree: usize) -> Self {
        Self {
            space: space.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The unit class (degree 0, coefficient 1).
    pub fn unit(space: &MultiProjSpace) -> Self {
        let exps = vec![0; space.num_factors()];
        let mut coeffs = BTreeMap::new();
        coeffs.insert(exps, BigRational::one());
        Self {
            space: space.clone(),
            degree: 0,
            coeffs,
        }
    }

    /// The hyperplane class `t_i` of the i-th factor.
    pub fn generator(space: &MultiProjSpace, factor: usize) -> Result<Self> {
        if factor >= space.num_factors() {
            return Err(Error::InvalidInput(format!(
                "factor index {factor} out of range ({} factors)",
                space.num_factors()
            )));
        }
        let mut exps = vec![0; space.num_factors()];
        exps[factor] = 1;
        Self::from_terms(space, 1, vec![(exps, BigRational::one())])
    }

    /// The Kähler class `omega = t_1 + ... + t_r`.
    pub fn kahler(space: &MultiProjSpace) -> Self {
        let r = space.num_factors();
        let mut coeffs = BTreeMap::new();
        for i in 0..r {
            let mut exps = vec![0; r];
            exps[i] = 1;
            coeffs.insert(exps, BigRational::one());
        }
        Self {
            space: space.clone(),
            degree: 1,
            coeffs,
        }
    }

    /// Build a class from explicit terms, validating the exponent bounds
    /// `0 <= e_i <= n_i` and `sum e_i = degree`.
    pub fn from_terms(
        space: &MultiProjSpace,
        degree: usize,
        terms: Vec<(Vec<usize>, BigRational)>,
    ) -> Result<Self> {
        let mut coeffs: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != space.num_factors() {
                return Err(Error::InvalidInput(format!(
                    "exponent tuple of length {} on a {}-factor space",
                    exps.len(),
                    space.num_factors()
                )));
            }
            if exps.iter().sum::<usize>() != degree {
                return Err(Error::InvalidInput(format!(
                    "exponent tuple {exps:?} does not have total degree {degree}"
                )));
            }
            if exps.iter().zip(space.factor_dims()).any(|(&e, &n)| e > n) {
                return Err(Error::InvalidInput(format!(
                    "exponent tuple {exps:?} exceeds factor dimensions {:?}",
                    space.factor_dims()
                )));
            }
            if !c.is_zero() {
                let entry = coeffs.entry(exps).or_insert_with(BigRational::zero);
                *entry += c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Self {
            space: space.clone(),
            degree,
            coeffs,
        })
    }

    pub fn space(&self) -> &MultiProjSpace {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, exps: &[usize]) -> BigRational {
        self.coeffs
            .get(exps)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero(&self.space, self.degree);
        }
        Self {
            space: self.space.clone(),
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidInput(format!(
                "cannot add classes of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            let entry = coeffs.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Self {
            space: self.space.clone(),
            degree: self.degree.max(other.degree),
            coeffs,
        })
    }

    /// Cup product: coefficientwise polynomial multiplication truncated by
    /// `t_i^{n_i + 1} = 0`. The result has degree `deg(self) + deg(other)`,
    /// which must not exceed the total dimension.
    pub fn cup(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let degree = self.degree + other.degree;
        let total = self.space.total_dim();
        if degree > total {
            return Err(Error::DegreeOverflow { degree, total });
        }
        let dims = self.space.factor_dims().to_vec();
        let mut coeffs: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let sum: Vec<usize> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if sum.iter().zip(&dims).any(|(&e, &n)| e > n) {
                    continue; // truncated
                }
                let entry = coeffs.entry(sum).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Self {
            space: self.space.clone(),
            degree,
            coeffs,
        })
    }

    /// Cup power by repeated multiplication; `pow(0)` is the unit class.
    pub fn pow(&self, exponent: usize) -> Result<Self> {
        let mut acc = Self::unit(&self.space);
        for _ in 0..exponent {
            acc = acc.cup(self)?;
        }
        Ok(acc)
    }

    /// The pairing with the fundamental class: the coefficient of the top
    /// monomial when the degree is maximal, 0 otherwise.
    pub fn integrate(&self) -> BigRational {
        if self.degree != self.space.total_dim() {
            return BigRational::zero();
        }
        let top: Vec<usize> = self.space.factor_dims().to_vec();
        self.coefficient(&top)
    }

    /// The mass `<c, kahler^{k-p}>` against a degree-1 Kähler class with
    /// strictly positive coefficients.
    pub fn mass(&self, kahler: &Self) -> Result<BigRational> {
        if self.space != kahler.space {
            return Err(Error::SpaceMismatch);
        }
        if kahler.degree != 1 {
            return Err(Error::BadKahlerClass);
        }
        let r = kahler.space.num_factors();
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            if !kahler.coefficient(&e).is_positive() {
                return Err(Error::BadKahlerClass);
            }
        }
        let complement = self.space.total_dim() - self.degree;
        let power = kahler.pow(complement)?;
        Ok(self.cup(&power)?.integrate())
    }

    /// Künneth dual coefficients `alpha_j(c) = <c, t_1^{l-j} t_2^{m-p+j}>`
    /// on a two-factor space `P^l x P^m`, for
    /// `max(0, p-m) <= j <= min(l, p)`.
    pub fn alpha_coeffs(&self) -> Result<AlphaCoeffs> {
        if self.space.num_factors() != 2 {
            return Err(Error::NotTwoFactor {
                factors: self.space.num_factors(),
            });
        }
        let l = self.space.factor_dims()[0];
        let m = self.space.factor_dims()[1];
        let p = self.degree;
        let j_min = p.saturating_sub(m);
        let j_max = l.min(p);
        let mut values = Vec::new();
        for j in j_min..=j_max {
            let fiber_exp = (m + j) - p; // j >= p - m keeps this nonnegative
            let dual = Self::from_terms(
                &self.space,
                (l - j) + fiber_exp,
                vec![(vec![l - j, fiber_exp], BigRational::one())],
            )?;
            values.push(self.cup(&dual)?.integrate());
        }
        Ok(AlphaCoeffs { j_min, values })
    }

    /// Coefficientwise nonnegativity: the effectivity proxy on products of
    /// projective spaces.
    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }
}

/// The vector of Künneth dual coefficients, indexed from `j_min`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaCoeffs {
    pub j_min: usize,
    pub values: Vec<BigRational>,
}

impl AlphaCoeffs {
    pub fn get(&self, j: usize) -> Option<&BigRational> {
        j.checked_sub(self.j_min).and_then(|i| self.values.get(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (self.j_min + i, v))
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from((n - i) as u64);
        den *= BigInt::from((i + 1) as u64);
    }
    num / den
}
