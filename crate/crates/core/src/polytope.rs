//! Exact convex hulls, volumes, Minkowski sums and mixed volumes for
//! lattice polytopes in ambient dimension at most 4.
//!
//! All predicates are integer orientation determinants; no floating point
//! enters any decision. Hulls are computed by incremental beneath-beyond
//! insertion with a small-integer fast path (`i128`) and an arbitrary
//! precision fallback. Degenerate inputs (lower-dimensional hulls) are kept
//! in the ambient space with volume 0.

// coordinate-indexed loops read better than zipped iterators here
#![allow(clippy::needless_range_loop)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Ambient dimension cap for hull, volume and mixed-volume computations.
pub const DIMENSION_CAP: usize = 4;

/// Coordinates above this magnitude force the arbitrary-precision hull path.
const SMALL_COORD_LIMIT: i128 = 1 << 24;

pub type Point = Vec<BigInt>;

/// A lattice polytope stored as the minimal vertex set of its convex hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Point>,
}

impl LatticePolytope {
    /// Convex hull of a nonempty set of integer points in `Z^d`, `d <= 4`.
    ///
    /// The result stores only true vertices: removing any of them shrinks
    /// the hull. Collinear and interior input points are dropped.
    pub fn convex_hull(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let dim = points[0].len();
        if dim == 0 || dim > DIMENSION_CAP {
            return Err(Error::DimensionCap {
                dim,
                cap: DIMENSION_CAP,
            });
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.len(),
                });
            }
        }
        let dedup = dedup_points(points);
        let idx = minimal_vertex_indices(&dedup);
        let mut vertices: Vec<Point> = idx.into_iter().map(|i| dedup[i].clone()).collect();
        vertices.sort();
        Ok(Self { dim, vertices })
    }

    pub fn from_i64_points(points: &[Vec<i64>]) -> Result<Self> {
        let pts: Vec<Point> = points
            .iter()
            .map(|p| p.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::convex_hull(&pts)
    }

    /// The standard simplex `conv{0, e_1, ..., e_d}`.
    pub fn standard_simplex(dim: usize) -> Result<Self> {
        if dim == 0 || dim > DIMENSION_CAP {
            return Err(Error::DimensionCap {
                dim,
                cap: DIMENSION_CAP,
            });
        }
        let mut pts = vec![vec![BigInt::zero(); dim]];
        for i in 0..dim {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::one();
            pts.push(e);
        }
        Self::convex_hull(&pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Minkowski sum: the hull of all pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let sums = pairwise_sums(&self.vertices, &other.vertices);
        Self::convex_hull(&sums)
    }

    /// Dilation by a nonnegative integer factor.
    pub fn dilate(&self, factor: &BigInt) -> Self {
        let vertices = if factor.is_zero() {
            vec![vec![BigInt::zero(); self.dim]]
        } else {
            let mut v: Vec<Point> = self
                .vertices
                .iter()
                .map(|p| p.iter().map(|c| c * factor).collect())
                .collect();
            v.sort();
            v
        };
        Self {
            dim: self.dim,
            vertices,
        }
    }

    /// Exact Euclidean volume. Polytopes of affine dimension below the
    /// ambient dimension have volume 0.
    pub fn volume(&self) -> BigRational {
        volume_of_points(&self.vertices, self.dim)
    }

    /// Whether the point lies in the hull (used by tests and monotonicity
    /// checks). Decided by re-running the hull with the point added.
    pub fn contains(&self, point: &Point) -> bool {
        if point.len() != self.dim {
            return false;
        }
        let mut pts = self.vertices.clone();
        pts.push(point.clone());
        match Self::convex_hull(&pts) {
            Ok(hull) => hull.vertices == self.vertices,
            Err(_) => false,
        }
    }
}

/// Mixed volume of `k` bodies in `Z^k`, normalized so that
/// `mixed_volume(Δ, ..., Δ) = 1`, i.e. `k!` times the classical polarized
/// form. Computed by inclusion-exclusion over Minkowski sums of subsets.
pub fn mixed_volume(bodies: &[LatticePolytope]) -> Result<BigRational> {
    if bodies.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let dim = bodies[0].dim;
    if dim > DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: DIMENSION_CAP,
        });
    }
    if bodies.len() != dim {
        return Err(Error::BodyCountMismatch {
            dim,
            got: bodies.len(),
        });
    }
    for b in bodies {
        if b.dim != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: b.dim,
            });
        }
    }
    let k = dim;
    // subsets with the same multiset of bodies have the same sum volume:
    // group them by signature and hull each distinct sum once
    let mut class_of = vec![0usize; k];
    let mut representatives: Vec<&LatticePolytope> = Vec::new();
    for (i, body) in bodies.iter().enumerate() {
        match representatives
            .iter()
            .position(|r| r.vertices == body.vertices)
        {
            Some(c) => class_of[i] = c,
            None => {
                class_of[i] = representatives.len();
                representatives.push(body);
            }
        }
    }
    let mut signatures: HashMap<Vec<usize>, i64> = HashMap::new();
    for mask in 1u32..(1 << k) {
        let mut sig = vec![0usize; representatives.len()];
        for (i, &c) in class_of.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sig[c] += 1;
            }
        }
        let sign: i64 = if (k - mask.count_ones() as usize).is_multiple_of(2) {
            1
        } else {
            -1
        };
        *signatures.entry(sig).or_insert(0) += sign;
    }
    let entries: Vec<(Vec<usize>, i64)> = signatures.into_iter().collect();
    // exact arithmetic: the parallel reduction order cannot change the sum
    let total: BigRational = entries
        .into_par_iter()
        .map(|(sig, count)| {
            let mut sum_pts: Vec<Point> = vec![vec![BigInt::zero(); k]];
            for (c, &mult) in sig.iter().enumerate() {
                for _ in 0..mult {
                    sum_pts = pairwise_sums(&sum_pts, &representatives[c].vertices);
                    sum_pts = dedup_points(&sum_pts);
                }
            }
            volume_of_points(&sum_pts, k) * BigRational::from_integer(BigInt::from(count))
        })
        .sum();
    Ok(total)
}

fn pairwise_sums(a: &[Point], b: &[Point]) -> Vec<Point> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for p in a {
        for q in b {
            out.push(p.iter().zip(q).map(|(x, y)| x + y).collect());
        }
    }
    out
}

fn dedup_points(points: &[Point]) -> Vec<Point> {
    let mut sorted: Vec<Point> = points.to_vec();
    sorted.sort();
    sorted.dedup();
    sorted
}

// ---------------------------------------------------------------------------
// Affine structure
// ---------------------------------------------------------------------------

/// Affine rank of a point set together with the data needed to project it
/// isomorphically onto full-dimensional integer coordinates.
struct AffineInfo {
    rank: usize,
    /// Indices (besides 0) of points whose differences form a basis.
    basis_points: Vec<usize>,
    /// Pivot columns: restriction to these coordinates is injective on the
    /// affine hull, so `p -> (p - p0)[pivot_cols]` preserves the face lattice.
    pivot_cols: Vec<usize>,
}

fn affine_info(points: &[Point]) -> AffineInfo {
    let dim = points[0].len();
    let base = &points[0];
    let mut pivots: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut basis_points = Vec::new();
    for (idx, p) in points.iter().enumerate().skip(1) {
        if pivots.len() == dim {
            break;
        }
        let mut v: Vec<BigRational> = p
            .iter()
            .zip(base)
            .map(|(a, b)| BigRational::from_integer(a - b))
            .collect();
        for (col, row) in &pivots {
            if !v[*col].is_zero() {
                let factor = v[*col].clone() / row[*col].clone();
                for j in 0..dim {
                    let delta = &factor * &row[j];
                    v[j] -= delta;
                }
            }
        }
        if let Some(col) = v.iter().position(|x| !x.is_zero()) {
            pivots.push((col, v));
            basis_points.push(idx);
        }
    }
    let mut pivot_cols: Vec<usize> = pivots.iter().map(|(c, _)| *c).collect();
    pivot_cols.sort_unstable();
    AffineInfo {
        rank: basis_points.len(),
        basis_points,
        pivot_cols,
    }
}

fn project(points: &[Point], base: &Point, cols: &[usize]) -> Vec<Point> {
    points
        .iter()
        .map(|p| cols.iter().map(|&c| &p[c] - &base[c]).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Minimal vertex sets
// ---------------------------------------------------------------------------

/// Indices of the points that are vertices of the convex hull.
///
/// Points must already be deduplicated. Works in any affine dimension by
/// projecting onto pivot coordinates and, in the full-dimensional case,
/// recursing into the (distinct) facet hyperplanes so that points interior
/// to a face are discarded as well.
fn minimal_vertex_indices(points: &[Point]) -> Vec<usize> {
    if points.len() == 1 {
        return vec![0];
    }
    let dim = points[0].len();
    let info = affine_info(points);
    if info.rank == 0 {
        return vec![0];
    }
    if info.rank < dim {
        let projected = project(points, &points[0].clone(), &info.pivot_cols);
        return minimal_vertex_indices(&projected);
    }
    if dim == 1 {
        let mut min_i = 0;
        let mut max_i = 0;
        for (i, p) in points.iter().enumerate() {
            if p[0] < points[min_i][0] {
                min_i = i;
            }
            if p[0] > points[max_i][0] {
                max_i = i;
            }
        }
        let mut out = vec![min_i, max_i];
        out.sort_unstable();
        out.dedup();
        return out;
    }

    let mut simplex = vec![0usize];
    simplex.extend_from_slice(&info.basis_points);
    let facets = hull_facets_dispatch(points, &simplex);

    // group coplanar simplicial facets by their (gcd-normalized) hyperplane
    let mut planes: HashMap<(Vec<BigInt>, BigInt), Vec<usize>> = HashMap::new();
    for f in &facets {
        let mut g = f.offset.clone();
        for c in &f.normal {
            g = g.gcd(c);
        }
        if g.is_zero() {
            g = BigInt::one();
        }
        let key = (
            f.normal.iter().map(|c| c / &g).collect::<Vec<_>>(),
            &f.offset / &g,
        );
        planes.entry(key).or_default();
    }
    let mut result = Vec::new();
    for (normal, offset) in planes.keys() {
        let face: Vec<usize> = (0..points.len())
            .filter(|&i| dot_big(normal, &points[i]) == *offset)
            .collect();
        let face_pts: Vec<Point> = face.iter().map(|&i| points[i].clone()).collect();
        for local in minimal_vertex_indices(&face_pts) {
            result.push(face[local]);
        }
    }
    result.sort_unstable();
    result.dedup();
    result
}

fn dot_big(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// ---------------------------------------------------------------------------
// Volume
// ---------------------------------------------------------------------------

/// Exact volume of the hull of a point set in ambient dimension `dim`;
/// 0 when the set is not full-dimensional.
fn volume_of_points(points: &[Point], dim: usize) -> BigRational {
    let pts = dedup_points(points);
    if pts.len() <= dim {
        return BigRational::zero();
    }
    let info = affine_info(&pts);
    if info.rank < dim {
        return BigRational::zero();
    }
    if dim == 1 {
        let min = pts.iter().map(|p| p[0].clone()).min().unwrap();
        let max = pts.iter().map(|p| p[0].clone()).max().unwrap();
        return BigRational::from_integer(max - min);
    }
    let mut simplex = vec![0usize];
    simplex.extend_from_slice(&info.basis_points);
    let facets = hull_facets_dispatch(&pts, &simplex);
    // cone decomposition from a point of the polytope: facets through the
    // apex contribute a zero determinant automatically
    let apex = &pts[0];
    let mut total = BigInt::zero();
    for f in &facets {
        let rows: Vec<Vec<BigInt>> = f
            .verts
            .iter()
            .map(|&v| {
                pts[v as usize]
                    .iter()
                    .zip(apex)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        total += det_big(&rows).abs();
    }
    let mut fact = BigInt::one();
    for i in 2..=dim {
        fact *= BigInt::from(i as u64);
    }
    BigRational::new(total, fact)
}

fn det_big(rows: &[Vec<BigInt>]) -> BigInt {
    match rows.len() {
        1 => rows[0][0].clone(),
        2 => &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
        n => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if rows[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<BigInt>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &rows[0][j] * det_big(&sub);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

// ---------------------------------------------------------------------------
// Incremental hull (beneath-beyond), generic over the coordinate type
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Facet {
    verts: Vec<u32>,
    normal: Vec<BigInt>,
    offset: BigInt,
}

trait HullScalar: Clone + Ord + Signed + std::fmt::Debug + Send + Sync {
    fn from_bigint(v: &BigInt) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl HullScalar for BigInt {
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

impl HullScalar for i128 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_i128().expect("coordinate fits i128 on the fast path")
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

fn hull_facets_dispatch(points: &[Point], simplex: &[usize]) -> Vec<Facet> {
    let small = points.iter().all(|p| {
        p.iter().all(|c| match c.to_i128() {
            Some(v) => v.abs() < SMALL_COORD_LIMIT,
            None => false,
        })
    });
    if small {
        hull_facets::<i128>(points, simplex)
    } else {
        hull_facets::<BigInt>(points, simplex)
    }
}

fn hull_facets<T: HullScalar>(big_points: &[Point], simplex: &[usize]) -> Vec<Facet> {
    let dim = big_points[0].len();
    let pts: Vec<Vec<T>> = big_points
        .iter()
        .map(|p| p.iter().map(T::from_bigint).collect())
        .collect();

    // orientation reference: sum of the initial simplex vertices; a facet
    // with outward normal n and offset c satisfies n . sum < (dim + 1) c
    let mut inner_sum = vec![T::zero(); dim];
    for &s in simplex {
        for j in 0..dim {
            inner_sum[j] = inner_sum[j].clone() + pts[s][j].clone();
        }
    }
    let inner_scale = T::from_bigint(&BigInt::from(dim as u64 + 1));

    struct RawFacet<T> {
        verts: Vec<u32>,
        normal: Vec<T>,
        offset: T,
    }

    let make_facet = |verts: Vec<u32>| -> RawFacet<T> {
        let q0 = &pts[verts[0] as usize];
        let rows: Vec<Vec<T>> = verts[1..]
            .iter()
            .map(|&v| {
                pts[v as usize]
                    .iter()
                    .zip(q0)
                    .map(|(a, b)| a.clone() - b.clone())
                    .collect()
            })
            .collect();
        // generalized cross product: cofactors along an appended row
        let mut normal = vec![T::zero(); dim];
        for j in 0..dim {
            let sub: Vec<Vec<T>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let cof = det_generic(&sub);
            normal[j] = if j % 2 == 0 { cof } else { -cof };
        }
        let mut offset = T::zero();
        for j in 0..dim {
            offset = offset + normal[j].clone() * q0[j].clone();
        }
        // flip so the simplex interior is on the negative side
        let mut inner_dot = T::zero();
        for j in 0..dim {
            inner_dot = inner_dot + normal[j].clone() * inner_sum[j].clone();
        }
        if inner_dot > offset.clone() * inner_scale.clone() {
            for n in normal.iter_mut() {
                *n = -n.clone();
            }
            offset = -offset;
        }
        RawFacet {
            verts,
            normal,
            offset,
        }
    };

    let mut facets: Vec<Option<RawFacet<T>>> = Vec::new();
    for skip in 0..=dim {
        let verts: Vec<u32> = simplex
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, &v)| v as u32)
            .collect();
        facets.push(Some(make_facet(verts)));
    }

    let in_simplex: std::collections::HashSet<usize> = simplex.iter().copied().collect();
    for p_idx in 0..pts.len() {
        if in_simplex.contains(&p_idx) {
            continue;
        }
        let p = &pts[p_idx];
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter_map(|(i, f)| {
                let f = f.as_ref()?;
                let mut d = T::zero();
                for j in 0..dim {
                    d = d + f.normal[j].clone() * p[j].clone();
                }
                (d > f.offset).then_some(i)
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let visible_set: std::collections::HashSet<usize> = visible.iter().copied().collect();
        // each ridge borders exactly two facets; horizon ridges border
        // exactly one visible facet
        let mut ridge_count: HashMap<Vec<u32>, u8> = HashMap::new();
        for &fi in &visible {
            let verts = &facets[fi].as_ref().unwrap().verts;
            for skip in 0..verts.len() {
                let mut ridge: Vec<u32> = verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                ridge.sort_unstable();
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut new_facets = Vec::new();
        for (ridge, count) in ridge_count {
            if count == 1 {
                let mut verts = ridge;
                verts.push(p_idx as u32);
                new_facets.push(make_facet(verts));
            }
        }
        for fi in visible_set {
            facets[fi] = None;
        }
        for f in new_facets {
            facets.push(Some(f));
        }
        facets.retain(|f| f.is_some());
    }

    facets
        .into_iter()
        .flatten()
        .map(|f| Facet {
            verts: f.verts,
            normal: f.normal.iter().map(|n| n.to_bigint()).collect(),
            offset: f.offset.to_bigint(),
        })
        .collect()
}

fn det_generic<T: HullScalar>(rows: &[Vec<T>]) -> T {
    match rows.len() {
        0 => T::one(),
        1 => rows[0][0].clone(),
        2 => rows[0][0].clone() * rows[1][1].clone() - rows[0][1].clone() * rows[1][0].clone(),
        n => {
            let mut acc = T::zero();
            for j in 0..n {
                if rows[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<T>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = rows[0][j].clone() * det_generic(&sub);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}
