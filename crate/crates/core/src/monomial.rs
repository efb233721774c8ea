//! Exact degree theory for monomial self-maps of `P^k`.
//!
//! A `k x k` integer matrix `A` with nonzero determinant defines the
//! dominant monomial map `x_i -> prod_j x_j^{a_ij}` on the torus and its
//! compactification `P^k`. Per-iterate degrees come from two independent
//! pipelines (reduced homogenization and mixed volumes of the row Newton
//! polytope), dynamical degrees from eigenvalue moduli of `A`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::polytope::{mixed_volume, LatticePolytope};
use crate::profile::{DegreeProfile, DegreeSequence, DegreeValue};
use crate::roots::root_moduli;

/// Cap for eigenvalue-based operations.
pub const SPECTRAL_CAP: usize = 8;
/// Cap for mixed-volume intermediate degrees.
pub const MIXED_VOLUME_CAP: usize = 4;

/// The exponent matrix of a dominant monomial self-map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    matrix: IntMatrix,
    det: BigInt,
}

impl ExponentMatrix {
    /// Rejects singular matrices: those define non-dominant maps.
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        let det = matrix.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { matrix, det })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_i64_rows(rows)?)
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn pow(&self, n: u64) -> Self {
        if n == 0 {
            let k = self.size();
            return Self {
                matrix: IntMatrix::identity(k),
                det: BigInt::one(),
            };
        }
        let matrix = self.matrix.pow(n);
        let det = matrix.det();
        Self { matrix, det }
    }

    pub fn char_poly(&self) -> Vec<BigInt> {
        self.matrix.char_poly()
    }
}

/// The common degree `D(A)` of the gcd-reduced homogenization of the
/// monomial map on `P^k`: lift each row to `Z^{k+1}` by prepending minus
/// its sum, include the zero vector for the 0-th component, translate by
/// the componentwise maximum of the negative parts, then subtract the
/// componentwise minimum.
pub fn homogenization_degree(a: &ExponentMatrix) -> BigInt {
    let k = a.size();
    let mut lifted: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); k + 1]];
    for row in a.matrix.rows() {
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
    for v in lifted.iter_mut() {
        for j in 0..=k {
            v[j] += &shift[j];
        }
    }
    let mut min = lifted[0].clone();
    for v in &lifted {
        for j in 0..=k {
            if v[j] < min[j] {
                min[j] = v[j].clone();
            }
        }
    }
    let degrees: Vec<BigInt> = lifted
        .iter()
        .map(|v| v.iter().zip(&min).map(|(x, m)| x - m).sum())
        .collect();
    let d = degrees[0].clone();
    debug_assert!(
        degrees.iter().all(|x| *x == d),
        "reduced lift is not equidegree"
    );
    d
}

/// The Newton polytope of the pullback of a generic hyperplane: the hull
/// of the rows of `A` together with the origin.
pub fn newton_polytope(a: &ExponentMatrix) -> Result<LatticePolytope> {
    let k = a.size();
    if k > MIXED_VOLUME_CAP {
        return Err(Error::DimensionCap {
            dim: k,
            cap: MIXED_VOLUME_CAP,
        });
    }
    let mut points: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); k]];
    for row in a.matrix.rows() {
        points.push(row.to_vec());
    }
    LatticePolytope::convex_hull(&points)
}

/// `delta_p(A)` by the mixed volume of `p` copies of the Newton polytope
/// and `k - p` standard simplices; valid for every `0 <= p <= k`, `k <= 4`.
pub fn delta_p_via_mixed_volume(a: &ExponentMatrix, p: usize) -> Result<BigInt> {
    let k = a.size();
    if p > k {
        return Err(Error::InvalidInput(format!(
            "order {p} exceeds dimension {k}"
        )));
    }
    if k > MIXED_VOLUME_CAP {
        return Err(Error::DimensionCap {
            dim: k,
            cap: MIXED_VOLUME_CAP,
        });
    }
    let poly = newton_polytope(a)?;
    let simplex = LatticePolytope::standard_simplex(k)?;
    let mut bodies = Vec::with_capacity(k);
    for _ in 0..p {
        bodies.push(poly.clone());
    }
    for _ in p..k {
        bodies.push(simplex.clone());
    }
    let mv = mixed_volume(&bodies)?;
    if !mv.is_integer() {
        return Err(Error::InvalidInput(format!(
            "mixed volume {mv} of a lattice configuration is not an integer"
        )));
    }
    Ok(mv.to_integer())
}

/// The per-iterate degree `delta_p(A) = lambda_p(f_A)`.
///
/// Orders 0, 1 and k are exact for every `k <= 8` (trivial class,
/// homogenization degree, |det|); intermediate orders go through mixed
/// volumes and are capped at `k <= 4`.
pub fn delta_p(a: &ExponentMatrix, p: usize) -> Result<BigInt> {
    let k = a.size();
    if p > k {
        return Err(Error::InvalidInput(format!(
            "order {p} exceeds dimension {k}"
        )));
    }
    if k > SPECTRAL_CAP {
        return Err(Error::DimensionCap {
            dim: k,
            cap: SPECTRAL_CAP,
        });
    }
    if p == 0 {
        return Ok(BigInt::one());
    }
    if p == k {
        return Ok(a.det.abs());
    }
    if p == 1 {
        return Ok(homogenization_degree(a));
    }
    delta_p_via_mixed_volume(a, p)
}

/// The exact sequence `lambda_p(f^n) = delta_p(A^n)` for `n = 1..=N`.
///
/// Every entry is computed from its own exact power `A^n`; composing
/// per-step degrees would overcount whenever pullback fails to be
/// functorial.
pub fn degree_sequence(a: &ExponentMatrix, p: usize, n_max: usize) -> Result<DegreeSequence> {
    if n_max == 0 {
        return Err(Error::InvalidInput("need at least one iterate".into()));
    }
    // validate caps once up front so the parallel loop cannot half-fail
    delta_p(a, p)?;
    let values: Result<Vec<BigInt>> = (1..=n_max as u64)
        .into_par_iter()
        .map(|n| delta_p(&a.pow(n), p))
        .collect();
    Ok(DegreeSequence::new(p, values?))
}

/// The exact dynamical degree profile `d_p = |mu_1 ... mu_p|` over the
/// eigenvalue moduli of `A`, sorted by modulus, for `k <= 8`.
///
/// `d_0 = 1` and `d_k = |det A|` are exact integers; intermediate values
/// are float shadows of exact algebraic numbers, good to at least 12
/// digits, cross-validated downstream against degree-sequence ratios.
pub fn dynamical_degrees_exact(a: &ExponentMatrix) -> Result<DegreeProfile> {
    let k = a.size();
    if k > SPECTRAL_CAP {
        return Err(Error::DimensionCap {
            dim: k,
            cap: SPECTRAL_CAP,
        });
    }
    let cp = a.char_poly();
    let moduli = root_moduli(&cp)?;
    let mut values = Vec::with_capacity(k + 1);
    values.push(DegreeValue::ExactInt(BigInt::one()));
    let mut acc = 1.0f64;
    for (i, m) in moduli.iter().enumerate() {
        acc *= m;
        if i + 1 == k {
            values.push(DegreeValue::ExactInt(a.det.abs()));
        } else {
            values.push(DegreeValue::Algebraic(acc));
        }
    }
    let profile = DegreeProfile::with_char_poly(values, cp);
    profile.check_invariants()?;
    Ok(profile)
}

/// Splits a block-lower-triangular exponent matrix along the coordinate
/// fibration onto the first `l` torus coordinates: returns the induced
/// base matrix `B` and the fiber block `D`.
pub fn block_fibration(a: &ExponentMatrix, l: usize) -> Result<(ExponentMatrix, ExponentMatrix)> {
    let k = a.size();
    if l == 0 || l >= k {
        return Err(Error::InvalidInput(format!(
            "base split l = {l} must satisfy 1 <= l < k = {k}"
        )));
    }
    if !a.matrix.is_zero_block(0..l, l..k) {
        return Err(Error::NotBlockTriangular);
    }
    let base = ExponentMatrix::new(a.matrix.block(0..l, 0..l))?;
    let fiber = ExponentMatrix::new(a.matrix.block(l..k, l..k))?;
    Ok((base, fiber))
}

/// Relative dynamical degrees of the coordinate fibration: the profile of
/// the fiber block, with `d_0(f|pi) = 1` exactly.
pub fn relative_degrees_exact(fiber_block: &ExponentMatrix) -> Result<DegreeProfile> {
    dynamical_degrees_exact(fiber_block)
}
