use proptest::prelude::*;

use super::*;
use crate::families::*;
use crate::liealg::{jordan_holder_basis, mohsen_flag, mohsen_modification};
use crate::poly::Poly;
use crate::rational::{ints, q, unit};
use crate::testutil::{positive_rational, rational_vec};

fn h1() -> LieAlgebra {
    heisenberg(1).unwrap()
}

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

#[test]
fn kirillov_examples() {
    let g = h1();
    let om = kirillov_form(&g, &unit(3, 2));
    assert_eq!(om[0][1], q(1));
    assert_eq!(om[1][0], q(-1));
    assert_eq!(linalg::rank(&om), 2);
    assert_eq!(linalg::rank(&kirillov_form(&g, &unit(3, 0))), 0);
    let e = engel().unwrap();
    assert_eq!(linalg::rank(&kirillov_form(&e, &unit(4, 0))), 2);
}

#[test]
fn stabilizer_examples() {
    let g = h1();
    let flag = jordan_holder_basis(&g).unwrap();
    assert_eq!(flag.permutation(), &[2, 0, 1]);
    let z = unit(3, 2);
    assert_eq!(stabilizer(&g, &flag, &z, 3), Subspace::coordinate(3, &[2]));
    assert_eq!(stabilizer(&g, &flag, &unit(3, 0), 3), Subspace::full(3));
    assert_eq!(stabilizer(&g, &flag, &z, 2), Subspace::coordinate(3, &[0, 2]));
    assert_eq!(stabilizer_full(&g, &z), Subspace::coordinate(3, &[2]));
}

#[test]
fn heisenberg_pfaffians() {
    for n in 1..=3 {
        let g = heisenberg(n).unwrap();
        let pf = pfaffian_on_center_dual(&g, &jordan_holder_basis(&g).unwrap()).unwrap();
        let expect = Poly::var(1, 0).pow(n as u32);
        assert!(pf.poly == expect || pf.poly == -&expect, "{n}: {}", pf.render(&g));
    }
}

#[test]
fn complex_heisenberg_pfaffian() {
    for n in 1..=2 {
        let g = complex_heisenberg(n).unwrap();
        let pf = pfaffian_on_center_dual(&g, &jordan_holder_basis(&g).unwrap()).unwrap();
        let s = &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(2);
        let expect = s.pow(n as u32);
        assert!(pf.poly == expect || pf.poly == -&expect, "{n}: {}", pf.render(&g));
    }
}

#[test]
fn chain_pfaffian() {
    let g = quotient_chain(4).unwrap();
    let flag = jordan_holder_basis(&g).unwrap();
    let pf = pfaffian_on_center_dual(&g, &flag).unwrap();
    let expect = &Poly::var(3, 0) * &Poly::var(3, 2);
    assert!(pf.poly == expect || pf.poly == -&expect, "{}", pf.render(&g));
    assert!(pf.poly.is_homogeneous());
    assert_eq!(pf.poly.total_degree(), Some(2));
}

#[test]
fn pfaffian_of_explicit_matrices() {
    let x = |i| Poly::var(6, i);
    let z = Poly::zero(6);
    let m = vec![
        vec![z.clone(), x(0), x(1), x(2)],
        vec![-&x(0), z.clone(), x(3), x(4)],
        vec![-&x(1), -&x(3), z.clone(), x(5)],
        vec![-&x(2), -&x(4), -&x(5), z.clone()],
    ];
    let expect = &(&(&x(0) * &x(5)) - &(&x(1) * &x(4))) + &(&x(2) * &x(3));
    assert_eq!(pfaffian(&m, 6), expect);
    assert_eq!(pfaffian(&[], 6), Poly::one(6));
}

#[test]
fn no_flat_orbits() {
    for (g, reason) in [
        (engel().unwrap(), FlatReason::OddCodimension),
        (quotient_chain(3).unwrap(), FlatReason::OddCodimension),
        (upper_triangular(3).unwrap(), FlatReason::OddCodimension),
        (free_step2(3).unwrap(), FlatReason::OddCodimension),
        (abelian(2).unwrap(), FlatReason::Flat),
    ] {
        let v = has_flat_orbits(&g, &jordan_holder_basis(&g).unwrap()).unwrap();
        assert_eq!(v.reason, reason, "{}", g.name());
        assert_eq!(v.flat, reason == FlatReason::Flat);
    }
}

#[test]
fn vanishing_pfaffian_with_even_codimension() {
    // every ω_ξ has the form e0* ∧ (…), so it is degenerate, yet the center is only z
    let g = LieAlgebra::new("degenerate", vec![1, 1, 1, 1, 2, 2, 2], None, &[(0, 1, 4, q(1)), (0, 2, 5, q(1)), (0, 3, 6, q(1))]).unwrap();
    assert_eq!(g.center(), Subspace::coordinate(7, &[4, 5, 6]));
    assert!(g.validate().is_empty());
    let v = has_flat_orbits(&g, &jordan_holder_basis(&g).unwrap()).unwrap();
    assert_eq!(v.reason, FlatReason::PfaffianVanishes);
}

#[test]
fn flat_witnesses() {
    let families = [heisenberg(2).unwrap(), complex_heisenberg(1).unwrap(), quotient_chain(4).unwrap(), heisenberg_product(&[1, 1]).unwrap()];
    for g in families {
        let flag = jordan_holder_basis(&g).unwrap();
        let v = has_flat_orbits(&g, &flag).unwrap();
        assert!(v.flat, "{}", g.name());
        let w = v.witness.unwrap();
        assert!(!v.pfaffian.eval(&w).is_zero());
        assert!(is_flat(&g, &extend_center_covector(&g, &flag, &w)));
    }
}

#[test]
fn mohsen_outputs_have_flat_orbits() {
    for g in [abelian(1).unwrap(), h1(), engel().unwrap(), quotient_chain(3).unwrap()] {
        let m = mohsen_modification(&g).unwrap();
        let v = has_flat_orbits(&m, &jordan_holder_basis(&m).unwrap()).unwrap();
        assert!(v.flat, "{}", g.name());
        let flag = mohsen_flag(&g).unwrap();
        let n = g.dim();
        let xi = extend_center_covector(&m, &flag, &[q(1)]);
        let h = vergne_polarization(&m, &flag, &xi).unwrap();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.push(2 * n);
        assert_eq!(h, Subspace::coordinate(2 * n + 1, &idx), "{}", g.name());
    }
}

#[test]
fn flatness_examples() {
    let g = h1();
    assert!(is_flat(&g, &unit(3, 2)));
    assert!(!is_flat(&g, &unit(3, 0)));
    let c = quotient_chain(4).unwrap();
    assert!(!is_flat(&c, &ints(&[0, 0, 0, 0, 1, 1, 0])));
    let flag = jordan_holder_basis(&g).unwrap();
    assert!(is_on_gamma_partial(&g, &flag, &[q(1)]));
    assert!(!is_on_gamma_partial(&g, &flag, &[q(2)]));
    let cf = jordan_holder_basis(&c).unwrap();
    assert!(is_on_gamma_partial(&c, &cf, &ints(&[1, 0, 1])));
    assert!(!is_on_gamma_partial(&c, &cf, &ints(&[1, 0, 2])));
}

#[test]
fn jump_index_examples() {
    let g = h1();
    let flag = jordan_holder_basis(&g).unwrap();
    let p = jump_indices(&g, &flag, &unit(3, 2));
    assert_eq!(p.last(), &set(&[2, 3]));
    assert_eq!(p.0, vec![set(&[]), set(&[]), set(&[2, 3])]);
    assert!(jump_indices(&g, &flag, &unit(3, 0)).last().is_empty());
    for g in [heisenberg(2).unwrap(), quotient_chain(4).unwrap(), complex_heisenberg(1).unwrap()] {
        let flag = jordan_holder_basis(&g).unwrap();
        let w = has_flat_orbits(&g, &flag).unwrap().witness.unwrap();
        let p = jump_indices(&g, &flag, &extend_center_covector(&g, &flag, &w));
        let expect: BTreeSet<usize> = (flag.center_dim() + 1..=g.dim()).collect();
        assert_eq!(p.last(), &expect, "{}", g.name());
    }
}

#[test]
fn strata_examples() {
    let g = h1();
    let flag = jordan_holder_basis(&g).unwrap();
    let mut samples = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                samples.push(ints(&[a, b, c]));
            }
        }
    }
    let s = enumerate_strata(&g, &flag, &samples).unwrap();
    assert_eq!(s.strata.len(), 2);
    assert_eq!(s.top.orbit_dim(), 2);

    let a = abelian(2).unwrap();
    let s = enumerate_strata(&a, &jordan_holder_basis(&a).unwrap(), &sample_covectors(2, 10, 1)).unwrap();
    assert_eq!(s.strata.len(), 1);
    assert!(s.top.last().is_empty());
    assert!(enumerate_strata(&a, &jordan_holder_basis(&a).unwrap(), &[]).is_err());

    let c = complex_heisenberg(1).unwrap();
    let cf = jordan_holder_basis(&c).unwrap();
    // points of z* ∖ {0}; the second stratum sits on the axis ξ_re = 0
    let mut flat = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            if (a, b) != (0, 0) {
                flat.push(extend_center_covector(&c, &cf, &ints(&[a, b])));
            }
        }
    }
    let s = enumerate_strata(&c, &cf, &flat).unwrap();
    let profiles: Vec<String> = s.strata.keys().map(JumpProfile::render).collect();
    assert_eq!(profiles.len(), 2, "{profiles:?}");
    assert!(s.strata.keys().all(|p| p.orbit_dim() == 4));
    assert_eq!(s.strata.values().map(Vec::len).min(), Some(2));
}

#[test]
fn vergne_examples() {
    let g = h1();
    let flag = jordan_holder_basis(&g).unwrap();
    assert_eq!(vergne_polarization(&g, &flag, &unit(3, 2)).unwrap(), Subspace::coordinate(3, &[0, 2]));
    let c = quotient_chain(4).unwrap();
    let cf = jordan_holder_basis(&c).unwrap();
    let xi = extend_center_covector(&c, &cf, &ints(&[1, 1, 1]));
    assert_eq!(vergne_polarization(&c, &cf, &xi).unwrap(), Subspace::coordinate(7, &[0, 2, 4, 5, 6]));
}

#[test]
fn automorphism_action() {
    let g = h1();
    let flag = jordan_holder_basis(&g).unwrap();
    let t = q(3);
    let d = g.dilation_matrix(&t).unwrap();
    assert_eq!(aut_action_on_lambda(&g, &flag, &d, &[q(1)]).unwrap(), vec![q(9)]);
    assert_eq!(aut_action_on_lambda(&g, &flag, &linalg::identity(3), &[q(5)]).unwrap(), vec![q(5)]);
    let bad = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 2])];
    assert!(aut_action_on_lambda(&g, &flag, &bad, &[q(1)]).is_err());
}

#[test]
fn cocycle_examples() {
    let g = h1();
    let flag = jordan_holder_basis(&g).unwrap();
    // complement order is (X, Y)
    assert_eq!(central_cocycle(&g, &flag, &ints(&[1, 0]), &ints(&[0, 1])).unwrap(), vec![qf(1, 2)]);
    assert_eq!(central_cocycle(&g, &flag, &ints(&[0, 1]), &ints(&[1, 0])).unwrap(), vec![qf(-1, 2)]);
    assert_eq!(central_cocycle(&g, &flag, &ints(&[3, 2]), &ints(&[0, 0])).unwrap(), vec![q(0)]);
    assert_eq!(central_cocycle(&g, &flag, &ints(&[0, 0]), &ints(&[3, 2])).unwrap(), vec![q(0)]);
}

#[test]
fn reduced_form_is_nondegenerate() {
    let c = quotient_chain(4).unwrap();
    let (idx, form) = reduced_symplectic_form(&c, &ints(&[0, 0, 0, 0, 1, 2, 3]));
    assert_eq!(idx, vec![0, 1, 2, 3]);
    assert!(!linalg::det(&form).is_zero());
}

fn corpus() -> Vec<LieAlgebra> {
    vec![h1(), heisenberg(2).unwrap(), engel().unwrap(), quotient_chain(4).unwrap(), complex_heisenberg(1).unwrap(), upper_triangular(3).unwrap(), free_step2(3).unwrap()]
}

fn algebra_and_covector() -> impl Strategy<Value = (usize, Vec<Rational>, Vec<Rational>)> {
    (0..7usize).prop_flat_map(|i| {
        let n = corpus()[i].dim();
        (Just(i), rational_vec(n), rational_vec(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_is_even((i, xi, _x) in algebra_and_covector()) {
        let g = &corpus()[i];
        prop_assert_eq!(linalg::rank(&kirillov_form(g, &xi)) % 2, 0);
    }

    #[test]
    fn flatness_agrees((i, xi, _x) in algebra_and_covector()) {
        let g = &corpus()[i];
        let flag = jordan_holder_basis(g).unwrap();
        let p = jump_indices(g, &flag, &xi);
        let flat = is_flat(g, &xi);
        prop_assert_eq!(flat, p.orbit_dim() == g.dim() - flag.center_dim());
        prop_assert_eq!(p.orbit_dim(), linalg::rank(&kirillov_form(g, &xi)));
        let pf = pfaffian_on_center_dual(g, &flag).unwrap();
        let xz = restrict_to_center(&flag, &xi);
        let central = extend_center_covector(g, &flag, &xz);
        prop_assert_eq!(is_flat(g, &central), !pf.odd_codimension && !pf.eval(&xz).is_zero());
    }

    #[test]
    fn pfaffian_squares_to_determinant((i, xi, _x) in algebra_and_covector()) {
        let g = &corpus()[i];
        let flag = jordan_holder_basis(g).unwrap();
        let pf = pfaffian_on_center_dual(g, &flag).unwrap();
        if !pf.odd_codimension {
            let xz = restrict_to_center(&flag, &xi);
            let v = pf.eval(&xz);
            prop_assert_eq!(&v * &v, linalg::det(&pfaffian::center_form_at(g, &flag, &xz)));
        }
    }

    #[test]
    fn vergne_properties((i, xi, _x) in algebra_and_covector()) {
        let g = &corpus()[i];
        let flag = jordan_holder_basis(g).unwrap();
        let h = vergne_polarization(g, &flag, &xi).unwrap();
        prop_assert!(h.contains_subspace(&stabilizer_full(g, &xi)));
    }

    #[test]
    fn profiles_are_orbit_invariant((i, xi, x) in algebra_and_covector()) {
        let g = &corpus()[i];
        let flag = jordan_holder_basis(g).unwrap();
        let moved = coadjoint_move(g, &x, &xi);
        prop_assert_eq!(jump_indices(g, &flag, &xi), jump_indices(g, &flag, &moved));
    }

    #[test]
    fn pfaffian_homogeneity(t in positive_rational(), xz in rational_vec(3)) {
        let c = quotient_chain(4).unwrap();
        let flag = jordan_holder_basis(&c).unwrap();
        let pf = pfaffian_on_center_dual(&c, &flag).unwrap();
        let d = c.dilation_matrix(&t).unwrap();
        let moved = aut_action_on_lambda(&c, &flag, &d, &xz).unwrap();
        // complement weights sum to 4
        prop_assert_eq!(pf.eval(&moved), rational::pow(&t, 4) * pf.eval(&xz));
    }

    #[test]
    fn aut_action_composes(s in positive_rational(), t in positive_rational(), xz in rational_vec(1)) {
        let g = h1();
        let flag = jordan_holder_basis(&g).unwrap();
        let mut a = g.dilation_matrix(&s).unwrap();
        // shear X ↦ X + Y is an automorphism
        a[1][0] = q(1);
        let b = g.dilation_matrix(&t).unwrap();
        let ab = linalg::matmul(&a, &b);
        let lhs = aut_action_on_lambda(&g, &flag, &ab, &xz).unwrap();
        let rhs = aut_action_on_lambda(&g, &flag, &b, &aut_action_on_lambda(&g, &flag, &a, &xz).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cocycle_identity(i in 0..3usize, x in rational_vec(6), y in rational_vec(6), z in rational_vec(6)) {
        let g = [h1(), engel().unwrap(), quotient_chain(4).unwrap()][i].clone();
        let flag = jordan_holder_basis(&g).unwrap();
        let m = flag.complement().len();
        let (x, y, z) = (&x[..m], &y[..m], &z[..m]);
        let xy = quotient_product(&g, &flag, x, y).unwrap();
        let yz = quotient_product(&g, &flag, y, z).unwrap();
        let lhs = rational::add(&central_cocycle(&g, &flag, x, y).unwrap(), &central_cocycle(&g, &flag, &xy, z).unwrap());
        let rhs = rational::add(&central_cocycle(&g, &flag, x, &yz).unwrap(), &central_cocycle(&g, &flag, y, z).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
