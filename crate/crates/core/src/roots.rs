//! Root moduli of integer polynomials, accurate to well beyond 12 digits.
//!
//! The pipeline is: Yun square-free decomposition over Q, closed forms for
//! degrees 1 and 2, Durand-Kerner simultaneous iteration for higher degree
//! with Cauchy-bound initialization, then Newton polishing in exact complex
//! rational arithmetic (rounded to 320 fractional bits between steps). A
//! failed validation retries with fresh starting angles and finally with
//! the iteration itself run in rounded rational arithmetic before giving up.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const POLISH_BITS: u64 = 320;

/// Moduli of the roots of the polynomial (ascending integer coefficients),
/// sorted in descending order, repeated with multiplicity.
pub fn root_moduli(coeffs: &[BigInt]) -> Result<Vec<f64>> {
    let poly: Vec<BigRational> = coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut poly = QPoly::new(poly);
    if poly.is_zero() {
        return Err(Error::InvalidInput(
            "zero polynomial has no well-defined roots".into(),
        ));
    }
    let mut moduli = Vec::new();
    // strip zero roots
    while !poly.coeffs.is_empty() && poly.coeffs[0].is_zero() {
        moduli.push(0.0);
        poly.coeffs.remove(0);
    }
    if poly.degree() == 0 {
        moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
        return Ok(moduli);
    }
    for (factor, multiplicity) in square_free_decomposition(&poly) {
        let roots = moduli_of_square_free(&factor)?;
        for m in roots {
            for _ in 0..multiplicity {
                moduli.push(m);
            }
        }
    }
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(moduli)
}

// ---------------------------------------------------------------------------
// Rational univariate polynomials
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct QPoly {
    /// Ascending coefficients; empty means the zero polynomial, otherwise
    /// the last entry is nonzero.
    coeffs: Vec<BigRational>,
}

impl QPoly {
    fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn monic(&self) -> Self {
        let lead = self.coeffs.last().expect("nonzero polynomial");
        Self::new(self.coeffs.iter().map(|c| c / lead).collect())
    }

    fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![]);
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i as u64 + 1)))
                .collect(),
        )
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Self::new(out)
    }

    /// Euclidean division; the divisor must be nonzero.
    fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero());
        let mut rem = self.coeffs.clone();
        let d = divisor.degree();
        let lead = divisor.coeffs.last().unwrap().clone();
        if rem.len() <= d {
            return (Self::new(vec![]), Self::new(rem));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        loop {
            let r_deg = match rem.iter().rposition(|c| !c.is_zero()) {
                Some(i) if i >= d => i,
                _ => break,
            };
            let factor = &rem[r_deg] / &lead;
            let shift = r_deg - d;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let delta = &factor * dc;
                rem[shift + i] -= delta;
            }
            rem[r_deg] = BigRational::zero();
            quot[shift] = factor;
        }
        (Self::new(quot), Self::new(rem))
    }

    fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }
}

/// Yun square-free decomposition of a nonconstant polynomial over Q:
/// returns pairwise-coprime monic square-free factors with multiplicities.
pub(crate) fn square_free_decomposition(poly: &QPoly) -> Vec<(QPoly, usize)> {
    let f = poly.monic();
    let deriv = f.derivative();
    let g = f.gcd(&deriv);
    if g.degree() == 0 {
        return vec![(f, 1)];
    }
    let mut out = Vec::new();
    let (mut w, _) = f.divrem(&g);
    let (y0, _) = deriv.divrem(&g);
    let mut z = y0.sub(&w.derivative());
    let mut i = 1usize;
    while w.degree() > 0 {
        let gi = w.gcd(&z);
        if gi.degree() > 0 {
            out.push((gi.clone(), i));
        }
        let (w_next, _) = w.divrem(&gi);
        let (y_next, _) = z.divrem(&gi);
        w = w_next.monic();
        z = y_next.sub(&w.derivative());
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Complex rational arithmetic for polishing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct CRat {
    re: BigRational,
    im: BigRational,
}

impl CRat {
    fn from_f64(z: Complex64) -> Option<Self> {
        Some(Self {
            re: BigRational::from_float(z.re)?,
            im: BigRational::from_float(z.im)?,
        })
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Self {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    fn add_real(&self, r: &BigRational) -> Self {
        Self {
            re: &self.re + r,
            im: self.im.clone(),
        }
    }

    fn div(&self, other: &Self) -> Option<Self> {
        let n = other.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let conj = Self {
            re: other.re.clone(),
            im: -other.im.clone(),
        };
        let prod = self.mul(&conj);
        Some(Self {
            re: prod.re / &n,
            im: prod.im / n,
        })
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn round_bits(&self, bits: u64) -> Self {
        Self {
            re: round_to_bits(&self.re, bits),
            im: round_to_bits(&self.im, bits),
        }
    }
}

fn round_to_bits(q: &BigRational, bits: u64) -> BigRational {
    let scale = BigRational::from_integer(BigInt::one() << bits);
    let scaled = (q * &scale).round();
    scaled / scale
}

fn eval_qpoly(poly: &QPoly, z: &CRat) -> CRat {
    let mut acc = CRat {
        re: BigRational::zero(),
        im: BigRational::zero(),
    };
    for c in poly.coeffs.iter().rev() {
        acc = acc.mul(z).add_real(c);
    }
    acc
}

// ---------------------------------------------------------------------------
// Moduli of a square-free factor
// ---------------------------------------------------------------------------

fn moduli_of_square_free(factor: &QPoly) -> Result<Vec<f64>> {
    match factor.degree() {
        0 => Ok(vec![]),
        1 => {
            let root = -&factor.coeffs[0] / &factor.coeffs[1];
            Ok(vec![rational_to_f64(&root.abs())])
        }
        2 => Ok(quadratic_moduli(factor)),
        _ => polished_moduli(factor),
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().expect("rational fits in f64 range")
}

fn quadratic_moduli(f: &QPoly) -> Vec<f64> {
    // monic form z^2 + b z + c
    let monic = f.monic();
    let b = monic.coeffs[1].clone();
    let c = monic.coeffs[0].clone();
    let disc = &b * &b - BigRational::from_integer(BigInt::from(4)) * &c;
    if disc.is_negative() {
        // conjugate pair: |z|^2 = c exactly
        let m = rational_to_f64(&c).sqrt();
        return vec![m, m];
    }
    // real roots, computed cancellation-free
    let sqrt_disc = rational_to_f64(&disc).sqrt();
    let bf = rational_to_f64(&b);
    let cf = rational_to_f64(&c);
    if bf == 0.0 && cf == 0.0 {
        return vec![0.0, 0.0];
    }
    let sign = if bf >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (bf + sign * sqrt_disc);
    if q == 0.0 {
        // b = 0 and disc = 0 would mean c = 0, handled above; here one root 0
        return vec![cf.abs().sqrt(), 0.0];
    }
    vec![q.abs(), (cf / q).abs()]
}

fn polished_moduli(factor: &QPoly) -> Result<Vec<f64>> {
    let monic = factor.monic();
    for attempt in 0..4 {
        let approx = if attempt < 3 {
            durand_kerner_f64(&monic, attempt)
        } else {
            durand_kerner_rational(&monic)
        };
        let Some(approx) = approx else { continue };
        if let Some(moduli) = polish_and_validate(&monic, &approx) {
            return Ok(moduli);
        }
    }
    Err(Error::RootIsolation(format!(
        "Durand-Kerner failed to isolate the {} roots after retries",
        monic.degree()
    )))
}

fn durand_kerner_f64(monic: &QPoly, attempt: usize) -> Option<Vec<CRat>> {
    let d = monic.degree();
    let coeffs: Vec<f64> = monic.coeffs.iter().map(rational_to_f64).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let cauchy = 1.0 + coeffs[..d].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let radius =
        (coeffs[0].abs().powf(1.0 / d as f64)).clamp(0.5, cauchy) * (1.0 + 0.3 * attempt as f64);
    let offset = 0.41 + 0.73 * attempt as f64;
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / d as f64 + offset;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for j in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for l in 0..d {
                if l != j {
                    denom *= z[j] - z[l];
                }
            }
            if denom.norm_sqr() == 0.0 {
                return None;
            }
            let step = eval(z[j]) / denom;
            z[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
        }
        if max_step < 1e-13 {
            break;
        }
    }
    z.into_iter().map(CRat::from_f64).collect()
}

/// Durand-Kerner with every arithmetic step done in rounded rational
/// arithmetic: the high-precision fallback for clustered roots.
fn durand_kerner_rational(monic: &QPoly) -> Option<Vec<CRat>> {
    let d = monic.degree();
    let cauchy = 1.0
        + monic.coeffs[..d]
            .iter()
            .map(|c| rational_to_f64(&c.abs()))
            .fold(0.0, f64::max);
    let mut z: Vec<CRat> = (0..d)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / d as f64 + 0.37;
            CRat::from_f64(Complex64::from_polar(0.7 * cauchy, angle)).unwrap()
        })
        .collect();
    let tiny = BigRational::new(BigInt::one(), BigInt::one() << 200);
    for _ in 0..400 {
        let mut max_step = BigRational::zero();
        for j in 0..d {
            let mut denom = CRat {
                re: BigRational::one(),
                im: BigRational::zero(),
            };
            for l in 0..d {
                if l != j {
                    denom = denom.mul(&z[j].sub(&z[l]));
                }
            }
            let step = eval_qpoly(monic, &z[j]).div(&denom)?;
            z[j] = z[j].sub(&step).round_bits(POLISH_BITS);
            let s = step.norm_sqr();
            if s > max_step {
                max_step = s;
            }
        }
        if max_step < tiny {
            break;
        }
    }
    Some(z)
}

fn polish_and_validate(monic: &QPoly, approx: &[CRat]) -> Option<Vec<f64>> {
    let deriv = monic.derivative();
    let mut roots = Vec::with_capacity(approx.len());
    for z0 in approx {
        let mut z = z0.round_bits(POLISH_BITS);
        let mut last_step = BigRational::one();
        for _ in 0..6 {
            let fz = eval_qpoly(monic, &z);
            let dz = eval_qpoly(&deriv, &z);
            let step = fz.div(&dz)?;
            z = z.sub(&step).round_bits(POLISH_BITS);
            last_step = step.norm_sqr();
            if last_step < BigRational::new(BigInt::one(), BigInt::one() << 300) {
                break;
            }
        }
        // converged far beyond the 12-digit contract
        let threshold =
            (BigRational::one() + z.norm_sqr()) / BigRational::from_integer(BigInt::one() << 160);
        if last_step > threshold {
            return None;
        }
        roots.push(z);
    }
    // roots of a square-free factor must be pairwise distinct
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let dist = roots[i].sub(&roots[j]).norm_sqr();
            let scale = (BigRational::one() + roots[i].norm_sqr())
                / BigRational::from_integer(BigInt::one() << 120);
            if dist < scale {
                return None;
            }
        }
    }
    // integrity: the product of all |z|^2 must match (c0 / cd)^2
    let mut prod = BigRational::one();
    for r in &roots {
        prod *= r.norm_sqr();
    }
    let expected = {
        let ratio = &monic.coeffs[0] / monic.coeffs.last().unwrap();
        &ratio * &ratio
    };
    let err = (&prod - &expected).abs();
    let tol = expected.abs() * BigRational::new(BigInt::one(), BigInt::from(10u64).pow(20))
        + BigRational::new(BigInt::one(), BigInt::from(10u64).pow(30));
    if err > tol {
        return None;
    }
    Some(
        roots
            .iter()
            .map(|r| rational_to_f64(&r.norm_sqr()).sqrt())
            .collect(),
    )
}
