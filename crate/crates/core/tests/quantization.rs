//! Operator constructions checked against closed forms and independently
//! assembled matrices.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tq_core::linalg::{DenseMatrix, SparseVec};
use tq_core::quantization::verify::{random_poly, random_symbol, verify_axioms};
use tq_core::quantization::{q_integer, Basis, GramData};
use tq_core::{Model, Monomial, NcPoly, Presentation, Rule, Scalar, SymbolElem, TruncatedOperator};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn z_pow(n: u32) -> NcPoly {
    NcPoly::monomial(Monomial::from_exponents(vec![n]))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

#[test]
fn bargmann_inner_products() {
    let model = Model::bargmann(1, BigRational::one()).unwrap();
    let space = model.space(6).unwrap();
    assert_eq!(space.inner_product(&z_pow(0), &z_pow(0)).unwrap(), s(1));
    for n in 0..=6 {
        let expected = Scalar::real(BigRational::from_integer(factorial(n)));
        assert_eq!(space.inner_product(&z_pow(n), &z_pow(n)).unwrap(), expected);
    }
    assert!(space.inner_product(&z_pow(1), &z_pow(2)).unwrap().is_zero());
    // conjugate-linear in the first slot
    let iz = z_pow(1).scale(&Scalar::i());
    assert_eq!(space.inner_product(&iz, &z_pow(1)).unwrap(), -Scalar::i());
    assert_eq!(space.inner_product(&z_pow(1), &iz).unwrap(), Scalar::i());

    let one = SymbolElem::one(1);
    assert_eq!(space.star_inner_product(&one, &one).unwrap(), s(1));
    let zs = SymbolElem::embed_star(&z_pow(1));
    assert_eq!(space.star_inner_product(&zs, &zs).unwrap(), s(1));
    assert!(space.star_inner_product(&SymbolElem::embed(&z_pow(1)), &zs).is_err());
}

#[test]
fn creation_operators() {
    let model = Model::bargmann(1, BigRational::one()).unwrap();
    let space = model.space(5).unwrap();
    assert_eq!(space.creation_op(&NcPoly::one(1)), space.identity());
    let shift = space.creation_op(&z_pow(1));
    for j in 0..6 {
        let expected = if j < 5 { SparseVec::unit(j + 1) } else { SparseVec::new() };
        assert_eq!(*shift.column(j), expected);
    }
    assert_eq!(shift.valid_in_degree(), 4);

    let manin = Presentation::manin_plane(s(2));
    let gram = GramData::explicit(identity_blocks(2, 4), BigRational::one()).unwrap();
    let model = Model::new(manin, gram).unwrap();
    let space = model.space(3).unwrap();
    let x1 = space.creation_op(&NcPoly::generator(2, 0));
    let out = space.apply(&x1, &NcPoly::generator(2, 1)).unwrap();
    assert_eq!(out, NcPoly::term(s(2), Monomial::from_exponents(vec![1, 1])));
}

fn identity_blocks(n: usize, d: usize) -> Vec<DenseMatrix> {
    (0..=d).map(|k| DenseMatrix::identity(tq_core::monomial::monomials_of_degree(n, k).len())).collect()
}

/// `A(z) e_n = w_n / w_{n−1} · e_{n−1}` for a diagonal weight sequence.
fn check_ladder(model: &Model, d: usize, ratio: impl Fn(u32) -> BigRational) {
    let space = model.space(d).unwrap();
    let a = space.annihilation_op(&z_pow(1));
    assert!(a.column(0).is_zero());
    for n in 1..=d {
        let expected: SparseVec = [(n - 1, Scalar::real(ratio(n as u32)))].into_iter().collect();
        assert_eq!(*a.column(n), expected, "column {n}");
    }
    assert_eq!(a.raise(), -1);
    assert_eq!(a.valid_in_degree(), d as i64);
}

#[test]
fn annihilation_matches_closed_forms() {
    for hbar in [rat(1, 1), rat(2, 3), rat(5, 1)] {
        let model = Model::bargmann(1, hbar.clone()).unwrap();
        check_ladder(&model, 10, |n| BigRational::from_integer(n.into()) * &hbar);
    }
    for (q, hbar) in [(rat(2, 1), rat(1, 1)), (rat(1, 2), rat(3, 1)), (rat(-1, 3), rat(1, 1)), (rat(0, 1), rat(1, 1))] {
        let model = Model::q_bargmann(q.clone(), hbar.clone()).unwrap();
        check_ladder(&model, 10, |n| {
            // [n]_q as an explicit geometric sum
            let mut acc = BigRational::zero();
            for k in 0..n {
                acc += num_traits::pow(q.clone(), k as usize);
            }
            acc * &hbar
        });
    }
    let model = Model::bargmann(1, BigRational::one()).unwrap();
    assert_eq!(model.space(4).unwrap().annihilation_op(&NcPoly::one(1)), model.space(4).unwrap().identity());
}

#[test]
fn two_mode_annihilation_closed_form() {
    let hbar = rat(3, 2);
    let model = Model::bargmann(2, hbar.clone()).unwrap();
    let space = model.space(6).unwrap();
    let basis = space.basis().clone();
    for g in 0..2 {
        let a = space.annihilation_op(&NcPoly::generator(2, g));
        for (j, m) in basis.monomials().iter().enumerate() {
            let e = m.exponents();
            let expected = if e[g] == 0 {
                SparseVec::new()
            } else {
                let mut lower = e.to_vec();
                lower[g] -= 1;
                let i = basis.index_of(&Monomial::from_exponents(lower)).unwrap();
                [(i, Scalar::real(BigRational::from_integer(e[g].into()) * &hbar))].into_iter().collect()
            };
            assert_eq!(*a.column(j), expected);
        }
    }
}

#[test]
fn adjoint_is_exact_against_untruncated_creation() {
    // dense, non-diagonal Gram blocks on a noncommutative algebra
    let rule = Rule { hi: 1, lo: 0, rhs: NcPoly::term(Scalar::from_ratio(1, 2), Monomial::from_exponents(vec![1, 1])) };
    let pres = Presentation::new(vec!["a".into(), "b".into()], vec![rule]).unwrap();
    let d = 4;
    let blocks = skewed_blocks(d + 2);
    let model = Model::new(pres, GramData::explicit(blocks, BigRational::one()).unwrap()).unwrap();
    let small = model.space(d).unwrap();
    let big = model.space(d + 2).unwrap();
    for k in [NcPoly::generator(2, 0), NcPoly::generator(2, 1), &NcPoly::generator(2, 0) + &z2_mixed()] {
        let a = small.annihilation_op(&k);
        let create = big.creation_op(&k);
        let kd = k.degree().unwrap();
        for (i, mi) in small.basis().monomials().iter().enumerate() {
            for (j, mj) in small.basis().monomials().iter().enumerate() {
                let lhs = small.inner_product_vec(a.column(i), &SparseVec::unit(j));
                let bi = big.basis().index_of(mi).unwrap();
                let bj = big.basis().index_of(mj).unwrap();
                let rhs = big.inner_product_vec(&SparseVec::unit(bi), create.column(bj));
                assert_eq!(lhs, rhs, "k of degree {kd}, pair ({i}, {j})");
            }
        }
    }
}

fn z2_mixed() -> NcPoly {
    NcPoly::term(Scalar::gaussian(1, 1), Monomial::from_exponents(vec![1, 1]))
}

/// Hermitian positive definite blocks `2I + (i on the superdiagonal)`.
fn skewed_blocks(d: usize) -> Vec<DenseMatrix> {
    (0..=d)
        .map(|k| {
            let n = k + 1;
            let mut m = DenseMatrix::diagonal(&vec![s(2); n]);
            for r in 0..n.saturating_sub(1) {
                m.set(r, r + 1, Scalar::gaussian(0, 1));
                m.set(r + 1, r, Scalar::gaussian(0, -1));
            }
            m
        })
        .collect()
}

#[test]
fn toeplitz_and_projection_examples() {
    let model = Model::bargmann(1, BigRational::one()).unwrap();
    let space = model.space(8).unwrap();
    assert_eq!(space.toeplitz_op(&SymbolElem::one(1)), space.identity());
    let psi = &z_pow(2) + &z_pow(1).scale(&Scalar::gaussian(0, 3));
    assert_eq!(space.toeplitz_op(&SymbolElem::embed(&psi)), space.creation_op(&psi));

    let zzs = SymbolElem::anti_wick(&z_pow(1), &z_pow(1));
    let t = space.toeplitz_op(&zzs);
    assert_eq!(t.valid_in_degree(), 7);
    for n in 0..=7 {
        let expected: SparseVec = [(n, s(n as i64 + 1))].into_iter().collect();
        assert_eq!(*t.column(n), expected);
    }
    // the top column lost z^9 to truncation
    assert!(t.column(8).is_zero());

    assert_eq!(space.projection(&SymbolElem::embed(&psi)).unwrap(), psi);
    assert_eq!(space.projection(&zzs).unwrap(), NcPoly::one(1));
    assert!(space.projection(&SymbolElem::embed_star(&z_pow(1))).unwrap().is_zero());
}

#[test]
fn degree_zero_truncation() {
    let model = Model::bargmann(1, BigRational::one()).unwrap();
    let space = model.space(0).unwrap();
    let t = space.toeplitz_op(&SymbolElem::one(1));
    assert_eq!(t.dim(), 1);
    assert_eq!(t.to_dense_rows(), vec![vec![s(1)]]);
}

#[test]
fn model_validation() {
    let manin = Presentation::manin_plane(s(3));
    assert!(matches!(
        Model::new(manin.clone(), GramData::bargmann(BigRational::one()).unwrap()),
        Err(tq_core::QuantError::BargmannNotCommutative)
    ));
    let two = Presentation::commutative(vec!["a".into(), "b".into()]);
    assert!(matches!(
        Model::new(two, GramData::q_bargmann(rat(2, 1), BigRational::one()).unwrap()),
        Err(tq_core::QuantError::QBargmannArity(2))
    ));
    let inhomogeneous = Presentation::new(
        vec!["a".into(), "b".into()],
        vec![Rule { hi: 1, lo: 0, rhs: &NcPoly::monomial(Monomial::from_exponents(vec![1, 1])) + &NcPoly::one(2) }],
    )
    .unwrap();
    let gram = GramData::explicit(identity_blocks(2, 3), BigRational::one()).unwrap();
    assert!(matches!(Model::new(inhomogeneous, gram), Err(tq_core::QuantError::NotGraded(_))));
    let short = Model::new(manin, GramData::explicit(identity_blocks(2, 2), BigRational::one()).unwrap()).unwrap();
    assert!(matches!(short.space(3), Err(tq_core::QuantError::GramDegree { degree: 3 })));
}

#[test]
fn axiom_suite_on_several_models() {
    let explicit = {
        let rule = Rule { hi: 1, lo: 0, rhs: NcPoly::term(s(-2), Monomial::from_exponents(vec![1, 1])) };
        let pres = Presentation::new(vec!["a".into(), "b".into()], vec![rule]).unwrap();
        Model::new(pres, GramData::explicit(skewed_blocks(6), rat(1, 2)).unwrap()).unwrap()
    };
    let models = [
        Model::bargmann(1, rat(1, 1)).unwrap(),
        Model::bargmann(2, rat(2, 3)).unwrap(),
        Model::q_bargmann(rat(2, 1), rat(1, 1)).unwrap(),
        Model::q_bargmann(rat(-1, 2), rat(3, 1)).unwrap(),
        explicit,
    ];
    for (k, model) in models.iter().enumerate() {
        let report = verify_axioms(model, 6, 8, 11 + k as u64).unwrap();
        for c in &report.checks {
            assert!(c.passed, "model {k}: {} failed: {:?}", c.name, c.witness);
            assert!(c.cases > 0, "model {k}: {} never ran", c.name);
        }
    }
}

#[test]
fn kernel_witnesses_agree_on_truncation_kernels() {
    // with q = 0 every weight is 1 and A(z) is the backward shift, so
    // z z* − 1 and z² z*² − 1 quantize to zero
    let model = Model::q_bargmann(rat(0, 1), rat(1, 1)).unwrap();
    let space = model.space(8).unwrap();
    let z = z_pow(1);
    let zz = z_pow(2);
    let one = SymbolElem::one(1);
    let g1 = &SymbolElem::anti_wick(&z, &z) - &one;
    let g2 = &SymbolElem::anti_wick(&zz, &zz) - &one;
    for g in [g1, g2, SymbolElem::zero(1)] {
        assert_eq!(space.kernel_witness_check(&g).unwrap(), (true, true));
    }
    assert_eq!(space.kernel_witness_check(&one).unwrap(), (false, false));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let g = random_symbol(&mut rng, 1, 3, 3, 3);
        let (a, b) = space.kernel_witness_check(&g).unwrap();
        assert_eq!(a, b, "g = {}", g.render(model.names()));
    }
}

#[test]
fn validity_region_is_respected_by_apply() {
    let model = Model::bargmann(1, BigRational::one()).unwrap();
    let space = model.space(4).unwrap();
    let up = space.creation_op(&z_pow(2));
    assert!(space.apply(&up, &z_pow(2)).is_ok());
    assert!(space.apply(&up, &z_pow(3)).is_err());
    let basis: Arc<Basis> = space.basis().clone();
    let product = TruncatedOperator::product(&basis, [&up, &up]);
    assert_eq!(product.valid_in_degree(), 0);
    assert!(product.respects_raise());
}

#[test]
fn q_integers_match_geometric_sums() {
    let q = rat(3, 1);
    assert_eq!(q_integer(&q, 4), rat(40, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projection_is_idempotent(seed in any::<u64>(), n in 1usize..=2) {
        let model = Model::bargmann(n, rat(1, 1)).unwrap();
        let space = model.space(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_symbol(&mut rng, n, 3, 3, 4);
        let p = space.projection(&g).unwrap();
        prop_assert_eq!(space.projection(&SymbolElem::embed(&p)).unwrap(), p.clone());
        // P(g) = T_g 1 through the operator route
        prop_assert_eq!(space.basis().poly(space.toeplitz_op(&g).column(0)), p);
    }

    #[test]
    fn theorem_three_one_part_three(seed in any::<u64>()) {
        let model = Model::bargmann(2, rat(1, 1)).unwrap();
        let space = model.space(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_symbol(&mut rng, 2, 2, 2, 3);
        let psi = random_poly(&mut rng, 2, 2, 3);
        let lhs = space.toeplitz_op(&g).compose(&space.creation_op(&psi));
        let rhs = space.toeplitz_op(&g.left_act(&psi, model.presentation()));
        prop_assert!(lhs.agrees_on_valid(&rhs).is_ok());
    }

    #[test]
    fn star_inner_product_is_anti_unitary(seed in any::<u64>()) {
        let model = Model::q_bargmann(rat(2, 1), rat(1, 3)).unwrap();
        let space = model.space(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_poly(&mut rng, 1, 6, 3);
        let psi = random_poly(&mut rng, 1, 6, 3);
        let lhs = space.star_inner_product(&SymbolElem::embed_star(&phi), &SymbolElem::embed_star(&psi)).unwrap();
        prop_assert_eq!(lhs, space.inner_product(&phi, &psi).unwrap().conj());
    }
}
