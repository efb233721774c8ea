#![allow(clippy::needless_range_loop)]

//! Property-based invariants: ring axioms for the cohomology pairing,
//! hull and mixed-volume laws, gcd reduction and degree submultiplicativity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dyndeg::cohomology::{CohomologyClass, MultiProjSpace};
use dyndeg::monomial::{delta_p, ExponentMatrix};
use dyndeg::mpoly::{gcd, MPoly};
use dyndeg::polytope::{mixed_volume, LatticePolytope};
use dyndeg::profile::{estimate_d1, log_concavity_exact, DegreeSequence};
use dyndeg::ratmap::ProjectiveRationalMap;

// ---------------------------------------------------------------------------
// Cohomology ring
// ---------------------------------------------------------------------------

fn class_strategy() -> impl Strategy<Value = (CohomologyClass, CohomologyClass, CohomologyClass)> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(l, m)| {
        let space = MultiProjSpace::new(vec![l, m]).unwrap();
        let degrees = (0usize..=1, 0usize..=1, 0usize..=l.min(2));
        (degrees, proptest::collection::vec(-5i64..=5, 24)).prop_map(
            move |((p1, p2, p3), coeffs)| {
                let mut it = coeffs.into_iter();
                let mut build = |p: usize| {
                    let mut terms = Vec::new();
                    for a in p.saturating_sub(m)..=p.min(l) {
                        let c = it.next().unwrap_or(0);
                        terms.push((vec![a, p - a], BigRational::from_integer(BigInt::from(c))));
                    }
                    CohomologyClass::from_terms(&space, p, terms).unwrap()
                };
                (build(p1), build(p2), build(p3))
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cup_is_commutative_associative_degree_additive(
        (a, b, c) in class_strategy()
    ) {
        let k = a.space().total_dim();
        if a.degree() + b.degree() <= k {
            let ab = a.cup(&b).unwrap();
            let ba = b.cup(&a).unwrap();
            prop_assert_eq!(&ab, &ba);
            prop_assert_eq!(ab.degree(), a.degree() + b.degree());
            if ab.degree() + c.degree() <= k {
                let left = ab.cup(&c).unwrap();
                let right = a.cup(&b.cup(&c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn pairing_is_symmetric_bilinear((a, b, c) in class_strategy()) {
        let k = a.space().total_dim();
        if a.degree() + b.degree() <= k {
            prop_assert_eq!(
                a.cup(&b).unwrap().integrate(),
                b.cup(&a).unwrap().integrate()
            );
        }
        if b.degree() == c.degree() && a.degree() + b.degree() <= k {
            let sum = b.add(&c).unwrap();
            let lhs = a.cup(&sum).unwrap().integrate();
            let rhs = a.cup(&b).unwrap().integrate() + a.cup(&c).unwrap().integrate();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kunneth_basis_reconstruction((a, _, _) in class_strategy()) {
        let alpha = a.alpha_coeffs().unwrap();
        let space = a.space().clone();
        let p = a.degree();
        let mut rebuilt = CohomologyClass::zero(&space, p);
        for (j, v) in alpha.iter() {
            let basis = CohomologyClass::from_terms(
                &space,
                p,
                vec![(vec![j, p - j], v.clone())],
            )
            .unwrap();
            rebuilt = rebuilt.add(&basis).unwrap();
        }
        prop_assert_eq!(rebuilt, a);
    }

    #[test]
    fn effective_classes_have_nonnegative_mass((a, _, _) in class_strategy()) {
        // flip all coefficients nonnegative to manufacture an effective class
        let space = a.space().clone();
        let terms: Vec<_> = a
            .terms()
            .map(|(e, c)| (e.clone(), c.abs()))
            .collect();
        let eff = CohomologyClass::from_terms(&space, a.degree(), terms).unwrap();
        prop_assert!(eff.is_effective());
        let kahler = CohomologyClass::kahler(&space);
        prop_assert!(!eff.mass(&kahler).unwrap().is_negative());
    }
}

// ---------------------------------------------------------------------------
// Polytopes
// ---------------------------------------------------------------------------

fn random_points(rng: &mut ChaCha8Rng, dim: usize, count: usize, bound: i64) -> Vec<Vec<BigInt>> {
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect()
}

/// Independent 2D oracle: Andrew's monotone chain with strict turns.
fn graham_hull_2d(points: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut pts: Vec<Vec<BigInt>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    let cross = |o: &Vec<BigInt>, a: &Vec<BigInt>, b: &Vec<BigInt>| -> BigInt {
        (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
    };
    let mut lower: Vec<Vec<BigInt>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= BigInt::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<BigInt>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= BigInt::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    let mut hull = lower;
    hull.extend(upper);
    hull.sort();
    hull.dedup();
    hull
}

#[test]
fn hull_matches_independent_2d_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2d0);
    for _ in 0..60 {
        let count = rng.gen_range(1..12);
        let pts = random_points(&mut rng, 2, count, 6);
        let hull = LatticePolytope::convex_hull(&pts).unwrap();
        let oracle = graham_hull_2d(&pts);
        assert_eq!(hull.vertices(), &oracle[..], "points {pts:?}");
    }
}

#[test]
fn hull_is_idempotent_and_contains_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1dee);
    for dim in 2..=4usize {
        for _ in 0..15 {
            let count = rng.gen_range(1..10);
            let pts = random_points(&mut rng, dim, count, 4);
            let hull = LatticePolytope::convex_hull(&pts).unwrap();
            let again = LatticePolytope::convex_hull(hull.vertices()).unwrap();
            assert_eq!(hull, again);
            for p in &pts {
                assert!(hull.contains(p), "dim {dim}: {p:?} outside its own hull");
            }
        }
    }
}

#[test]
fn volume_scales_with_dilation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd11a);
    for dim in 2..=4usize {
        for _ in 0..8 {
            let pts = random_points(&mut rng, dim, dim + 3, 3);
            let hull = LatticePolytope::convex_hull(&pts).unwrap();
            let doubled = hull.dilate(&BigInt::from(2));
            let factor = BigRational::from_integer(BigInt::from(1i64 << dim));
            assert_eq!(doubled.volume(), hull.volume() * factor);
        }
    }
}

#[test]
fn mixed_volume_symmetry_and_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a3a);
    for dim in 2..=3usize {
        let mut fact = BigRational::one();
        for i in 2..=dim {
            fact *= BigRational::from_integer(BigInt::from(i as i64));
        }
        for _ in 0..6 {
            let bodies: Vec<LatticePolytope> = (0..dim)
                .map(|_| {
                    let pts = random_points(&mut rng, dim, dim + 2, 2);
                    LatticePolytope::convex_hull(&pts).unwrap()
                })
                .collect();
            let reference = mixed_volume(&bodies).unwrap();
            // a transposition and a rotation generate the symmetric group
            let mut swapped = bodies.clone();
            swapped.swap(0, dim - 1);
            assert_eq!(mixed_volume(&swapped).unwrap(), reference);
            let mut rotated = bodies.clone();
            rotated.rotate_left(1);
            assert_eq!(mixed_volume(&rotated).unwrap(), reference);

            let diag: Vec<LatticePolytope> = vec![bodies[0].clone(); dim];
            assert_eq!(mixed_volume(&diag).unwrap(), bodies[0].volume() * &fact);
        }
    }
}

#[test]
fn mixed_volume_multilinear_and_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11ea);
    for dim in 2..=3usize {
        let simplex = LatticePolytope::standard_simplex(dim).unwrap();
        let rest: Vec<LatticePolytope> = vec![simplex.clone(); dim - 1];
        for _ in 0..6 {
            let p =
                LatticePolytope::convex_hull(&random_points(&mut rng, dim, dim + 2, 2)).unwrap();
            let q =
                LatticePolytope::convex_hull(&random_points(&mut rng, dim, dim + 2, 2)).unwrap();
            let a = BigInt::from(rng.gen_range(0i64..=2));
            let b = BigInt::from(rng.gen_range(1i64..=2));
            let combo = p.dilate(&a).minkowski_sum(&q.dilate(&b)).unwrap();

            let mut args = vec![combo];
            args.extend(rest.iter().cloned());
            let lhs = mixed_volume(&args).unwrap();
            let mut args_p = vec![p.clone()];
            args_p.extend(rest.iter().cloned());
            let mut args_q = vec![q.clone()];
            args_q.extend(rest.iter().cloned());
            let rhs = mixed_volume(&args_p).unwrap() * BigRational::from_integer(a.clone())
                + mixed_volume(&args_q).unwrap() * BigRational::from_integer(b.clone());
            assert_eq!(lhs, rhs);

            // monotonicity on a nested pair: P subset P + Q
            let bigger = p.minkowski_sum(&q).unwrap();
            let mut args_big = vec![bigger];
            args_big.extend(rest.iter().cloned());
            assert!(mixed_volume(&args_big).unwrap() >= mixed_volume(&args_p).unwrap());
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomial gcd and rational maps
// ---------------------------------------------------------------------------

fn mpoly_strategy(nvars: usize) -> impl Strategy<Value = MPoly> {
    proptest::collection::vec((proptest::collection::vec(0u64..3, nvars), -4i64..=4), 1..5)
        .prop_map(move |terms| {
            let mut acc = MPoly::zero(nvars);
            for (exps, c) in terms {
                acc = acc.add(&MPoly::monomial(nvars, exps, BigInt::from(c)));
            }
            acc
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gcd_divides_both_and_absorbs_common_factor(
        a in mpoly_strategy(2),
        b in mpoly_strategy(2),
        h in mpoly_strategy(2)
    ) {
        let g = gcd(&a, &b);
        if !a.is_zero() && !b.is_zero() {
            prop_assert!(a.exact_div(&g).is_some());
            prop_assert!(b.exact_div(&g).is_some());
        }
        if !h.is_zero() && !a.is_zero() && !b.is_zero() {
            let gh = gcd(&a.mul(&h), &b.mul(&h));
            let expected = g.mul(&h).normalize_sign();
            // gcd(ah, bh) = gcd(a, b) h up to sign
            prop_assert_eq!(gh, expected);
        }
    }
}

#[test]
fn reduction_is_idempotent_and_degree_submultiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe2e);
    let mut checked = 0;
    while checked < 12 {
        // random degree-2 maps of P^2 with ternary monomial components
        let comp = |rng: &mut ChaCha8Rng| -> MPoly {
            let mut acc = MPoly::zero(3);
            for _ in 0..rng.gen_range(1..=3) {
                let mut exps = vec![0u64; 3];
                for _ in 0..2 {
                    exps[rng.gen_range(0..3)] += 1;
                }
                acc = acc.add(&MPoly::monomial(
                    3,
                    exps,
                    BigInt::from(rng.gen_range(-3i64..=3)),
                ));
            }
            acc
        };
        let f = (0..3).map(|_| comp(&mut rng)).collect::<Vec<_>>();
        let g = (0..3).map(|_| comp(&mut rng)).collect::<Vec<_>>();
        let (Ok(f), Ok(g)) = (
            ProjectiveRationalMap::new(2, f),
            ProjectiveRationalMap::new(2, g),
        ) else {
            continue;
        };
        let reduced = f.gcd_reduce();
        assert_eq!(reduced.gcd_reduce(), reduced);
        if let Ok(comp) = f.compose(&g) {
            assert!(comp.degree() <= f.degree() * g.degree());
        }
        checked += 1;
    }
}

#[test]
fn upper_bound_dominates_exact_degree_on_random_monomial_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b0e);
    let mut checked = 0;
    while checked < 10 {
        let rows: Vec<Vec<i64>> = (0..2)
            .map(|_| (0..2).map(|_| rng.gen_range(-2i64..=2)).collect())
            .collect();
        let Ok(a) = ExponentMatrix::from_i64_rows(&rows) else {
            continue;
        };
        let profile = dyndeg::monomial::dynamical_degrees_exact(&a).unwrap();
        let d1 = profile.shadows()[1];
        let seq = dyndeg::monomial::degree_sequence(&a, 1, 10).unwrap();
        let est = estimate_d1(&seq).unwrap();
        assert!(est.upper_bound >= d1 - 1e-9, "{rows:?}");
        checked += 1;
    }
}

#[test]
fn per_iterate_degrees_are_log_concave_in_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x10c0);
    let mut checked = 0;
    while checked < 10 {
        let k = rng.gen_range(2..=4usize);
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..k).map(|_| rng.gen_range(-2i64..=2)).collect())
            .collect();
        let Ok(a) = ExponentMatrix::from_i64_rows(&rows) else {
            continue;
        };
        let deltas: Vec<BigInt> = (0..=k).map(|p| delta_p(&a, p).unwrap()).collect();
        let report = log_concavity_exact(&deltas);
        assert!(report.holds, "{rows:?} -> {deltas:?}");
        checked += 1;
    }
}

#[test]
fn submultiplicativity_of_first_degrees() {
    // lambda_1(f^{n+m}) <= lambda_1(f^n) lambda_1(f^m) on monomial maps
    let cases = [
        vec![vec![2, 1], vec![1, 1]],
        vec![vec![-1, 0], vec![0, -1]],
        vec![vec![1, 1], vec![0, 1]],
        vec![vec![2, 0], vec![3, 1]],
    ];
    for rows in &cases {
        let a = ExponentMatrix::from_i64_rows(rows).unwrap();
        let seq = dyndeg::monomial::degree_sequence(&a, 1, 8).unwrap();
        for n in 1..=4usize {
            for m in 1..=4usize {
                assert!(
                    seq.value(n + m) <= &(seq.value(n) * seq.value(m)),
                    "{rows:?} n={n} m={m}"
                );
            }
        }
    }
}

#[test]
fn estimate_requires_valid_sequences() {
    let empty = DegreeSequence::new(1, vec![]);
    assert!(estimate_d1(&empty).is_err());
    let with_zero = DegreeSequence::new(1, vec![BigInt::zero()]);
    assert!(estimate_d1(&with_zero).is_err());
}

// ---------------------------------------------------------------------------
// Independent geometry oracles
// ---------------------------------------------------------------------------

/// Exact membership test by simplex enumeration: `q` lies in the hull of
/// `points` iff some subset of at most d+1 of them carries `q` with
/// nonnegative barycentric coordinates. Completely independent of the
/// incremental hull.
fn in_hull_bruteforce(q: &[BigInt], points: &[Vec<BigInt>]) -> bool {
    let d = q.len();
    let n = points.len();
    // enumerate subsets of size <= d+1
    let mut subset: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        subset: &mut Vec<usize>,
        n: usize,
        max: usize,
        q: &[BigInt],
        points: &[Vec<BigInt>],
    ) -> bool {
        if !subset.is_empty() && barycentric_inside(q, subset, points) {
            return true;
        }
        if subset.len() == max {
            return false;
        }
        for i in start..n {
            subset.push(i);
            if rec(i + 1, subset, n, max, q, points) {
                return true;
            }
            subset.pop();
        }
        false
    }
    rec(0, &mut subset, n, d + 1, q, points)
}

/// Solves `sum_i t_i p_i = q`, `sum t_i = 1` exactly and checks `t >= 0`.
fn barycentric_inside(q: &[BigInt], subset: &[usize], points: &[Vec<BigInt>]) -> bool {
    let d = q.len();
    let m = subset.len();
    // rows: d coordinate equations plus the affine constraint
    let mut matrix: Vec<Vec<BigRational>> = Vec::with_capacity(d + 1);
    for row in 0..d {
        let mut r: Vec<BigRational> = subset
            .iter()
            .map(|&i| BigRational::from_integer(points[i][row].clone()))
            .collect();
        r.push(BigRational::from_integer(q[row].clone()));
        matrix.push(r);
    }
    let mut last: Vec<BigRational> = vec![BigRational::one(); m];
    last.push(BigRational::one());
    matrix.push(last);
    // gaussian elimination with exact pivoting
    let rows = matrix.len();
    let mut pivot_row = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..m {
        let Some(r) = (pivot_row..rows).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(pivot_row, r);
        let inv = matrix[pivot_row][col].clone();
        for c in col..=m {
            matrix[pivot_row][c] = &matrix[pivot_row][c] / &inv;
        }
        for r2 in 0..rows {
            if r2 != pivot_row && !matrix[r2][col].is_zero() {
                let f = matrix[r2][col].clone();
                for c in col..=m {
                    let delta = &f * &matrix[pivot_row][c];
                    matrix[r2][c] -= delta;
                }
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    // inconsistent system: a zero row with nonzero rhs
    for r in pivot_row..rows {
        if !matrix[r][m].is_zero() {
            return false;
        }
    }
    // free variables set to zero; check the pinned ones
    let mut t = vec![BigRational::zero(); m];
    for (r, c) in pivots {
        t[c] = matrix[r][m].clone();
    }
    t.iter().all(|v| !v.is_negative())
}

#[test]
fn hull_vertices_match_bruteforce_oracle_in_3d_and_4d() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0bce);
    for dim in 3..=4usize {
        for _ in 0..12 {
            let count = rng.gen_range(3..9);
            let pts = random_points(&mut rng, dim, count, 3);
            let mut dedup = pts.clone();
            dedup.sort();
            dedup.dedup();
            let hull = LatticePolytope::convex_hull(&pts).unwrap();
            let mut expected: Vec<Vec<BigInt>> = dedup
                .iter()
                .filter(|q| {
                    let others: Vec<Vec<BigInt>> =
                        dedup.iter().filter(|p| *p != *q).cloned().collect();
                    others.is_empty() || !in_hull_bruteforce(q, &others)
                })
                .cloned()
                .collect();
            expected.sort();
            assert_eq!(hull.vertices(), &expected[..], "dim {dim}: {pts:?}");
        }
    }
}

#[test]
fn volume_is_invariant_under_unimodular_maps() {
    use dyndeg::matrix::random_unimodular;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7071);
    for dim in 2..=4usize {
        for _ in 0..8 {
            // a box with known volume, sheared by GL(d, Z) and translated
            let sides: Vec<i64> = (0..dim).map(|_| rng.gen_range(1..=3)).collect();
            let mut corners: Vec<Vec<BigInt>> = Vec::new();
            for mask in 0u32..(1 << dim) {
                corners.push(
                    (0..dim)
                        .map(|i| {
                            if mask & (1 << i) != 0 {
                                BigInt::from(sides[i])
                            } else {
                                BigInt::zero()
                            }
                        })
                        .collect(),
                );
            }
            let u = random_unimodular(&mut rng, dim, 8);
            let shift: Vec<BigInt> = (0..dim)
                .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
                .collect();
            let mapped: Vec<Vec<BigInt>> = corners
                .iter()
                .map(|c| {
                    (0..dim)
                        .map(|i| {
                            let mut acc = shift[i].clone();
                            for j in 0..dim {
                                acc += u.at(i, j) * &c[j];
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let hull = LatticePolytope::convex_hull(&mapped).unwrap();
            let expected: BigInt = sides.iter().map(|&s| BigInt::from(s)).product();
            assert_eq!(
                hull.volume(),
                BigRational::from_integer(expected),
                "dim {dim} sides {sides:?}"
            );
        }
    }
}
