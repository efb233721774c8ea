//! Dominant rational self-maps of `P^k` as tuples of homogeneous integer
//! polynomials: parsing, gcd reduction, composition with reduction (the
//! mechanism behind algebraic-stability failures), first-degree sequences
//! and linear conjugation.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::monomial::ExponentMatrix;
use crate::mpoly::{gcd_many, MPoly};
use crate::parser::parse_component_list;
use crate::profile::DegreeSequence;

/// A rational self-map of `P^k`, stored as `k + 1` homogeneous components
/// of equal degree in the variables `x0..xk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveRationalMap {
    k: usize,
    degree: u64,
    components: Vec<MPoly>,
    reduced: bool,
}

impl ProjectiveRationalMap {
    /// Validates component count, homogeneity and equal degrees. The map
    /// is not reduced automatically.
    pub fn new(k: usize, components: Vec<MPoly>) -> Result<Self> {
        if components.len() != k + 1 {
            return Err(Error::InvalidInput(format!(
                "a map of P^{k} needs {} components, got {}",
                k + 1,
                components.len()
            )));
        }
        for c in &components {
            if c.nvars() != k + 1 {
                return Err(Error::InvalidInput(format!(
                    "component over {} variables in a map of P^{k}",
                    c.nvars()
                )));
            }
        }
        if components.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroMap);
        }
        let mut degree = None;
        for (i, c) in components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match c.homogeneous_degree() {
                None => return Err(Error::Inhomogeneous { component: i }),
                Some(d) => match degree {
                    None => degree = Some(d),
                    Some(d0) if d0 != d => {
                        return Err(Error::MixedDegrees {
                            degrees: components
                                .iter()
                                .map(|c| c.homogeneous_degree().unwrap_or(0) as usize)
                                .collect(),
                        })
                    }
                    _ => {}
                },
            }
        }
        Ok(Self {
            k,
            degree: degree.expect("nonzero map has a degree"),
            components,
            reduced: false,
        })
    }

    /// Parses a comma-separated list of `k + 1` components in `x0..xk`.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let components = parse_component_list(text, k + 1)?;
        Self::new(k, components)
    }

    /// The identity map of `P^k`.
    pub fn identity(k: usize) -> Self {
        let components = (0..=k).map(|i| MPoly::var(k + 1, i)).collect();
        Self {
            k,
            degree: 1,
            components,
            reduced: true,
        }
    }

    /// The gcd-reduced homogenization of a monomial map: the polynomial
    /// pipeline's entry point for the cross-validation against the
    /// lattice-geometry pipeline.
    pub fn from_exponent_matrix(a: &ExponentMatrix) -> Self {
        let k = a.size();
        let mut lifted: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); k + 1]];
        for row in a.matrix().rows() {
            let sum: BigInt = row.iter().sum();
            let mut v = Vec::with_capacity(k + 1);
            v.push(-sum);
            v.extend(row.iter().cloned());
            lifted.push(v);
        }
        let mut shift = vec![BigInt::zero(); k + 1];
        for j in 0..=k {
            for v in &lifted {
                if -&v[j] > shift[j] {
                    shift[j] = -&v[j];
                }
            }
        }
        let components: Vec<MPoly> = lifted
            .iter()
            .map(|v| {
                let exps: Vec<u64> = v
                    .iter()
                    .zip(&shift)
                    .map(|(x, s)| {
                        use num_traits::ToPrimitive;
                        (x + s).to_u64().expect("homogenized exponent fits u64")
                    })
                    .collect();
                MPoly::monomial(k + 1, exps, BigInt::one())
            })
            .collect();
        Self::new(k, components)
            .expect("homogenization is a valid map")
            .gcd_reduce()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn components(&self) -> &[MPoly] {
        &self.components
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Divides the components by their polynomial gcd (content included)
    /// and fixes the sign of the first nonzero component.
    pub fn gcd_reduce(&self) -> Self {
        let g = gcd_many(&self.components);
        let mut components: Vec<MPoly> = self
            .components
            .iter()
            .map(|c| {
                if c.is_zero() {
                    c.clone()
                } else {
                    c.exact_div(&g).expect("gcd divides every component")
                }
            })
            .collect();
        let flip = components
            .iter()
            .find(|c| !c.is_zero())
            .and_then(|c| c.lex_leading_coeff())
            .map(|coeff| coeff.is_negative())
            .unwrap_or(false);
        if flip {
            components = components.iter().map(|c| c.neg()).collect();
        }
        let degree = components
            .iter()
            .find(|c| !c.is_zero())
            .and_then(|c| c.homogeneous_degree())
            .expect("reduced map stays nonzero");
        Self {
            k: self.k,
            degree,
            components,
            reduced: true,
        }
    }

    /// Raw composition `self(other(x))`, expanded but not reduced.
    pub fn compose_unreduced(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch {
                left: self.k,
                right: other.k,
            });
        }
        let components: Vec<MPoly> = self
            .components
            .iter()
            .map(|c| c.substitute(&other.components))
            .collect();
        if components.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroComposition);
        }
        Self::new(self.k, components)
    }

    /// Composition followed by gcd reduction: the reduced iterate
    /// machinery. The degree can only drop below `deg(f) * deg(g)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(self.compose_unreduced(other)?.gcd_reduce())
    }

    /// The exact first-degree sequence `lambda_1(f^n)` for `n = 1..=N`,
    /// computed on the running reduced iterate `h_{n+1} = reduce(f o h_n)`.
    pub fn degree_sequence_d1(&self, n_max: usize) -> Result<DegreeSequence> {
        if n_max == 0 {
            return Err(Error::InvalidInput("need at least one iterate".into()));
        }
        if !self.is_dominant() {
            return Err(Error::NotDominant);
        }
        let mut values = Vec::with_capacity(n_max);
        let mut iterate = self.gcd_reduce();
        values.push(BigInt::from(iterate.degree));
        for n in 1..n_max {
            let terms: usize = iterate.components.iter().map(|c| c.num_terms()).sum();
            if terms > 2_000_000 {
                return Err(Error::Unsupported(format!(
                    "iterate {n} exceeds the symbolic size budget ({terms} terms)"
                )));
            }
            iterate = self.compose(&iterate)?;
            values.push(BigInt::from(iterate.degree));
        }
        Ok(DegreeSequence::new(1, values))
    }

    /// Probabilistic dominance test: the Jacobian determinant of the
    /// reduced lift is evaluated at random integer points. A nonzero value
    /// certifies dominance; three zero evaluations at independent points
    /// declare failure (false negatives are possible but vanishingly rare).
    pub fn is_dominant(&self) -> bool {
        let f = if self.reduced {
            self.clone()
        } else {
            self.gcd_reduce()
        };
        let n = self.k + 1;
        let jac: Vec<Vec<MPoly>> = f
            .components
            .iter()
            .map(|c| (0..n).map(|v| c.derivative(v)).collect())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x00d0_311a);
        for attempt in 0..3 {
            let point: Vec<BigInt> = if attempt == 0 {
                (1..=n as i64).map(BigInt::from).collect()
            } else {
                (0..n)
                    .map(|_| BigInt::from(rng.gen_range(-50i64..=50)))
                    .collect()
            };
            let rows: Vec<Vec<BigInt>> = jac
                .iter()
                .map(|row| row.iter().map(|p| p.eval_int(&point)).collect())
                .collect();
            let det = IntMatrix::from_rows(rows).expect("square").det();
            if !det.is_zero() {
                return true;
            }
        }
        false
    }

    /// Conjugation `M o f o M^{-1}` by an invertible integer matrix,
    /// realized projectively through the adjugate, then reduced.
    pub fn conjugate(&self, m: &IntMatrix) -> Result<Self> {
        if m.size() != self.k + 1 {
            return Err(Error::InvalidInput(format!(
                "conjugator must be {0} x {0}",
                self.k + 1
            )));
        }
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let n = self.k + 1;
        let adj = m.adjugate();
        let linear_forms: Vec<MPoly> = (0..n)
            .map(|i| {
                let mut acc = MPoly::zero(n);
                for j in 0..n {
                    acc = acc.add(&MPoly::var(n, j).mul_scalar(adj.at(i, j)));
                }
                acc
            })
            .collect();
        let pulled: Vec<MPoly> = self
            .components
            .iter()
            .map(|c| c.substitute(&linear_forms))
            .collect();
        let components: Vec<MPoly> = (0..n)
            .map(|i| {
                let mut acc = MPoly::zero(n);
                for j in 0..n {
                    acc = acc.add(&pulled[j].mul_scalar(m.at(i, j)));
                }
                acc
            })
            .collect();
        if components.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroComposition);
        }
        Ok(Self::new(self.k, components)?.gcd_reduce())
    }

    /// Evaluates the map at an integer projective point, returning the
    /// gcd-normalized image, or None when the point is indeterminate.
    pub fn eval_point(&self, point: &[BigInt]) -> Option<Vec<BigInt>> {
        use num_integer::Integer;
        let image: Vec<BigInt> = self.components.iter().map(|c| c.eval_int(point)).collect();
        if image.iter().all(|v| v.is_zero()) {
            return None;
        }
        let mut g = BigInt::zero();
        for v in &image {
            g = g.gcd(v);
        }
        let mut out: Vec<BigInt> = image.iter().map(|v| v / &g).collect();
        if let Some(first) = out.iter().find(|v| !v.is_zero()) {
            if first.is_negative() {
                out = out.iter().map(|v| -v).collect();
            }
        }
        Some(out)
    }
}

/// The standard Cremona involution of `P^2`.
pub fn cremona_involution() -> ProjectiveRationalMap {
    ProjectiveRationalMap::parse("x1*x2, x0*x2, x0*x1", 2).expect("valid map")
}
