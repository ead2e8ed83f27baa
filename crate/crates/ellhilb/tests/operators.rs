use ellhilb::algebra::TScalar;
use ellhilb::fock::{fock_pairing, FockMonomial, FockVector, LevelBasis};
use ellhilb::hilbop::*;
use ellhilb::series::PQSeries;
use ellhilb::surface::{builtin_surface, class_scale, rational_base_model, SurfaceModel};

fn odd_count(s: &SurfaceModel, m: &FockMonomial) -> usize {
    m.0.iter().filter(|f| s.is_odd(f.1)).count()
}

fn swap_sign(s: &SurfaceModel, x: &FockMonomial, y: &FockMonomial) -> TScalar {
    TScalar::from_int(if ((odd_count(s, x) + odd_count(s, y)) / 2) % 2 == 0 { 1 } else { -1 })
}

fn variant(s: &SurfaceModel) -> Variant {
    if s.equivariant {
        Variant::Exc
    } else {
        Variant::Compact
    }
}

/// `(Op x, y) = ε (Op y, x)` where `ε` is the symmetry sign of the pairing itself.
fn assert_self_adjoint(s: &SurfaceModel, op: &OperatorSeries) {
    let basis = op.basis.clone();
    for x in &basis.monomials {
        for y in &basis.monomials {
            let vx = FockVector::from_monomial(x.clone());
            let vy = FockVector::from_monomial(y.clone());
            let eps = swap_sign(s, x, y);
            let g = fock_pairing(s, &vx, &vy).unwrap();
            let gs = fock_pairing(s, &vy, &vx).unwrap();
            assert_eq!(g, &gs * &eps, "pairing symmetry {} | {}", x.display(s), y.display(s));
            let a = pair_with(s, op, &vx, &vy).unwrap();
            let b = pair_with(s, op, &vy, &vx).unwrap();
            assert_eq!(a, b.scale(&eps), "{} | {}", x.display(s), y.display(s));
        }
    }
}

#[test]
fn q_hilb_is_self_adjoint() {
    for name in ["p1xe", "exc"] {
        let s = builtin_surface(name).unwrap();
        for n in 1..=2 {
            assert_self_adjoint(&s, &q_hilb(&s, n, 3, variant(&s), 6).unwrap());
        }
    }
}

#[test]
fn q_pt_is_self_adjoint() {
    let s = builtin_surface("p1xe").unwrap();
    assert_self_adjoint(&s, &q_pt(&s, 2, 3, 6).unwrap());
    let r = rational_base_model(1, 2).unwrap();
    assert_self_adjoint(&r, &q_pt(&r, 2, 2, 6).unwrap());
}

/// Every nonzero entry maps a column of complex degree `d` to a row of
/// degree `d + 1`, counting `t` with degree 1.
fn assert_degree_shift(s: &SurfaceModel, op: &OperatorSeries) {
    let basis: &LevelBasis = &op.basis;
    for (col, c) in op.columns.iter().enumerate() {
        for (row, series) in c {
            let shift = basis.monomials[*row].real_degree(s) as i64 - basis.monomials[col].real_degree(s) as i64;
            for l in series.coeffs().values() {
                for t in l.terms().values() {
                    for e in t.terms().keys() {
                        assert_eq!(shift + 2 * e, 2, "entry ({row}, {col})");
                    }
                }
            }
        }
    }
}

#[test]
fn operators_raise_degree_by_one() {
    let s = builtin_surface("p1xe").unwrap();
    let sigma = class_scale(&s.classes.sigma, &TScalar::one());
    for n in 1..=3 {
        assert_degree_shift(&s, &q_hilb(&s, n, 2, Variant::Compact, 6).unwrap());
        assert_degree_shift(&s, &q_pt(&s, n, 2, 6).unwrap());
        assert_degree_shift(&s, &quantum_divisor(&s, &Divisor::Delta, n, 2, 6).unwrap());
        assert_degree_shift(&s, &quantum_divisor(&s, &Divisor::Class(sigma.clone()), n, 2, 6).unwrap());
    }
    let e = builtin_surface("exc").unwrap();
    for n in 1..=2 {
        assert_degree_shift(&e, &q_hilb(&e, n, 2, Variant::Exc, 6).unwrap());
        assert_degree_shift(&e, &quantum_divisor(&e, &Divisor::Delta, n, 2, 6).unwrap());
    }
}

#[test]
fn t_operators_match_q_pt() {
    let s = builtin_surface("p1xe").unwrap();
    for n in 1..=2 {
        let r = t_cross_check(&s, n, 3, 8).unwrap();
        assert!(r.passed(), "{r}");
    }
    let r = rational_base_model(1, 2).unwrap();
    let rep = t_cross_check(&r, 2, 2, 6).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn wallcross_holds_for_other_base_degrees() {
    for ds in [1, 2, 3] {
        let r = rational_base_model(ds, 1).unwrap();
        let rep = wallcross_check(&r, 2, 3, 6).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn compact_variant_rejects_equivariant_model() {
    let e = builtin_surface("exc").unwrap();
    assert!(q_hilb(&e, 1, 1, Variant::Compact, 4).is_err());
    assert!(q_pt(&e, 1, 1, 4).is_err());
    let s = builtin_surface("p1xe").unwrap();
    assert!(q_hilb(&s, 1, 1, Variant::Exc, 4).is_err());
}

#[test]
fn bracket_table_reads_minus_p_convention() {
    let mut series = PQSeries::zero(1);
    series.add_term(0, 0, &TScalar::from_int(5));
    series.add_term(0, 2, &TScalar::from_int(3));
    series.add_term(1, -4, &TScalar::from_int(7));
    let t = bracket_table(&series).unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!(t[&(0, 1)], TScalar::from_int(-3));
    assert_eq!(t[&(1, -2)], TScalar::from_int(7));
    series.add_term(1, 1, &TScalar::one());
    assert!(bracket_table(&series).is_err());
}

#[test]
fn basic_check_at_low_order_and_negative_control() {
    let r = ellhilb::verify::basic_check(2).unwrap();
    assert!(r.passed(), "{r}");
    let flipped = basic_check_with(2, 12, true).unwrap();
    let item = &flipped.items[1];
    assert!(!item.passed);
    assert!(item.detail.contains("(q^0, p^1)"), "{}", item.detail);
}
