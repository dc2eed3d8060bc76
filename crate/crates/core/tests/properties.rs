//! Property tests: randomized inputs exercising the algebraic invariants the
//! library promises (involutions, multiplicativity, congruence covariance,
//! conjugation equivariance, subgroup chains).

use std::sync::OnceLock;

use ccg_core::{
    congruence_transform, contains, elementary_divisors, enumerate_group, form_type,
    gl_conjugator, is_conjugate, is_isometry, jordan_decomposition, min_poly, standardize,
    EnumeratedGroup, Fel, Field, Form, GroupSpec, MatrixFq, Poly,
};
use proptest::prelude::*;

fn field(p: u64, k: u32) -> Field {
    Field::new(p, k).unwrap()
}

fn bar_field(p: u64, half_k: u32) -> Field {
    Field::with_bar(p, half_k).unwrap()
}

/// Square matrix over `F_q` from raw entry seeds.
fn matrix(f: &Field, n: usize, seeds: &[u64]) -> MatrixFq {
    let q = f.q();
    let mut m = MatrixFq::zero(f, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, (seeds[i * n + j] % q) as Fel);
        }
    }
    m
}

fn monic_poly(f: &Field, seeds: &[u64]) -> Poly {
    let q = f.q();
    let mut coeffs: Vec<Fel> = seeds.iter().map(|s| (s % q) as Fel).collect();
    coeffs.push(1);
    Poly::new(f, coeffs)
}

/// Formal derivative, for the squarefreeness check on minimal polynomials.
fn derivative(f: &Field, poly: &Poly) -> Poly {
    let mut coeffs = Vec::new();
    for i in 1..=poly.degree() {
        let mut scalar = f.zero();
        for _ in 0..(i as u64 % f.p()) {
            scalar = f.add(scalar, f.one());
        }
        coeffs.push(f.mul(scalar, poly.coeff(i)));
    }
    Poly::new(f, coeffs)
}

fn cached_group(
    name: &str,
    n: usize,
    q: u64,
    slot: &'static OnceLock<EnumeratedGroup>,
) -> &'static EnumeratedGroup {
    slot.get_or_init(|| enumerate_group(&GroupSpec::from_name(name, n, q).unwrap()).unwrap())
}

static SP43: OnceLock<EnumeratedGroup> = OnceLock::new();
static OPLUS43: OnceLock<EnumeratedGroup> = OnceLock::new();
static U32: OnceLock<EnumeratedGroup> = OnceLock::new();
static GL23: OnceLock<EnumeratedGroup> = OnceLock::new();

proptest! {
    /// bar is an involutive field automorphism.
    #[test]
    fn bar_involutive_automorphism(pk in prop::sample::select(vec![(2u64, 1u32), (3, 1), (2, 2)]), a in any::<u64>(), b in any::<u64>()) {
        let f = bar_field(pk.0, pk.1);
        let a = (a % f.q()) as Fel;
        let b = (b % f.q()) as Fel;
        prop_assert_eq!(f.bar(f.bar(a)), a);
        prop_assert_eq!(f.bar(f.add(a, b)), f.add(f.bar(a), f.bar(b)));
        prop_assert_eq!(f.bar(f.mul(a, b)), f.mul(f.bar(a), f.bar(b)));
    }

    /// dual is multiplicative and involutive on monic polynomials with
    /// nonzero constant term.
    #[test]
    fn dual_multiplicative_involution(q in prop::sample::select(vec![(2u64, 1u32), (3, 1), (2, 2), (5, 1)]), fs in prop::collection::vec(any::<u64>(), 1..4), gs in prop::collection::vec(any::<u64>(), 1..4)) {
        let f = field(q.0, q.1);
        let a = monic_poly(&f, &fs);
        let b = monic_poly(&f, &gs);
        prop_assume!(a.coeff(0) != 0 && b.coeff(0) != 0);
        let da = a.dual().unwrap();
        let db = b.dual().unwrap();
        prop_assert_eq!(a.mul(&b).dual().unwrap(), da.mul(&db));
        prop_assert_eq!(da.dual().unwrap(), a);
    }

    /// gl_conjugator succeeds exactly when the elementary divisors agree,
    /// and its witness verifies.
    #[test]
    fn gl_conjugator_iff_equal_divisors(q in prop::sample::select(vec![2u64, 3]), xs in prop::collection::vec(any::<u64>(), 9), ys in prop::collection::vec(any::<u64>(), 9)) {
        let f = field(q, 1);
        let x = matrix(&f, 3, &xs);
        let y = matrix(&f, 3, &ys);
        prop_assume!(x.det() != 0 && y.det() != 0);
        let same = elementary_divisors(&x).unwrap().items == elementary_divisors(&y).unwrap().items;
        match gl_conjugator(&x, &y).unwrap() {
            Some(z) => {
                prop_assert!(same);
                prop_assert_eq!(x.conjugate_by(&z), y);
            }
            None => prop_assert!(!same),
        }
    }

    /// Jordan decomposition: x = s·u = u·s, u unipotent, s semisimple,
    /// and the decomposition is unique (re-derivation returns it).
    #[test]
    fn jordan_decomposition_is_commuting_and_unique(q in prop::sample::select(vec![2u64, 3]), xs in prop::collection::vec(any::<u64>(), 9)) {
        let f = field(q, 1);
        let x = matrix(&f, 3, &xs);
        prop_assume!(x.det() != 0);
        let (s, u) = jordan_decomposition(&x).unwrap();
        prop_assert_eq!(s.mul(&u), x.clone());
        prop_assert_eq!(u.mul(&s), x.clone());
        // u unipotent: (u − 1)ⁿ = 0
        let nil = u.add(&MatrixFq::identity(&f, 3).neg());
        prop_assert_eq!(nil.mul(&nil).mul(&nil), MatrixFq::zero(&f, 3));
        // s semisimple: squarefree minimal polynomial
        let m = min_poly(&s);
        prop_assert_eq!(m.gcd(&derivative(&f, &m)).degree(), 0);
        let (s2, u2) = jordan_decomposition(&x).unwrap();
        prop_assert_eq!((s2, u2), (s, u));
    }

    /// Isometries transported along a congruence are isometries of the
    /// transported form, and form_type is a congruence invariant.
    #[test]
    fn congruence_transports_isometries_and_type(ix in any::<usize>(), ts in prop::collection::vec(any::<u64>(), 16)) {
        let g = cached_group("O+", 4, 3, &OPLUS43);
        let spec = GroupSpec::from_name("O+", 4, 3).unwrap();
        let form = spec.form.as_ref().unwrap();
        let x = &g.elements[ix % g.len()];
        let t = matrix(&spec.field, 4, &ts);
        prop_assume!(t.det() != 0);
        let moved_form = form.transform(&t).unwrap();
        let moved_x = x.conjugate_by(&t.inverse().unwrap());
        prop_assert!(is_isometry(&moved_x, &moved_form));
        prop_assert_eq!(form_type(&moved_form).unwrap(), form_type(form).unwrap());
    }

    /// standardize is idempotent on its own output, and congruence
    /// transforms compose.
    #[test]
    fn standardize_idempotent_and_transforms_compose(gs in prop::collection::vec(any::<u64>(), 9), ts in prop::collection::vec(any::<u64>(), 9)) {
        let f = field(3, 1);
        let mut gram = MatrixFq::zero(&f, 3);
        for i in 0..3 {
            for j in i..3 {
                let v = (gs[i * 3 + j] % 3) as Fel;
                gram.set(i, j, v);
                gram.set(j, i, v);
            }
        }
        prop_assume!(gram.det() != 0);
        let b1 = Form::new(ccg_core::FormKind::Symmetric, gram).unwrap();
        let (t1, std1) = standardize(&b1).unwrap();
        let moved = b1.transform(&t1).unwrap();
        prop_assert_eq!(moved.gram(), std1.gram());
        let (t2, std2) = standardize(&std1).unwrap();
        prop_assert_eq!(std2.gram(), std1.gram());
        let fixed = std1.transform(&t2).unwrap();
        prop_assert_eq!(fixed.gram(), std1.gram());
        // composition of congruences B1 → B2 → B1
        let t = matrix(&f, 3, &ts);
        prop_assume!(t.det() != 0);
        let b2 = b1.transform(&t).unwrap();
        let u1 = congruence_transform(&b1, &b2).unwrap();
        let u2 = congruence_transform(&b2, &b1).unwrap();
        let both = u2.mul(&u1);
        let round = b2.transform(&both).unwrap();
        prop_assert_eq!(round.gram(), b2.gram());
    }

    /// Subgroup chains: Ω ⊂ SO ⊂ O, SU ⊂ U, SL ⊂ GL.
    #[test]
    fn contains_respects_subgroup_chains(i in any::<usize>(), j in any::<usize>(), k in any::<usize>()) {
        let o = cached_group("O+", 4, 3, &OPLUS43);
        let so = GroupSpec::from_name("SO+", 4, 3).unwrap();
        let omega = GroupSpec::from_name("Omega+", 4, 3).unwrap();
        let x = &o.elements[i % o.len()];
        if contains(&omega, x) {
            prop_assert!(contains(&so, x));
        }
        if contains(&so, x) {
            prop_assert!(contains(&o.spec, x));
        }
        let u = cached_group("U", 3, 2, &U32);
        let su = GroupSpec::from_name("SU", 3, 2).unwrap();
        let y = &u.elements[j % u.len()];
        if contains(&su, y) {
            prop_assert!(contains(&u.spec, y));
        }
        let gl = cached_group("GL", 2, 3, &GL23);
        let sl = GroupSpec::from_name("SL", 2, 3).unwrap();
        let z = &gl.elements[k % gl.len()];
        prop_assert_eq!(contains(&sl, z), z.det() == 1);
    }

    /// Conjugacy decisions are equivariant: conjugating both arguments by a
    /// group element never changes the answer.
    #[test]
    fn conjugacy_decision_is_equivariant(i in any::<usize>(), j in any::<usize>(), k in any::<usize>()) {
        let g = cached_group("Sp", 4, 3, &SP43);
        let spec = GroupSpec::from_name("Sp", 4, 3).unwrap();
        let x = &g.elements[i % g.len()];
        let y = &g.elements[j % g.len()];
        let z = &g.elements[k % g.len()];
        let before = is_conjugate(&spec, x, y).unwrap();
        let after = is_conjugate(&spec, &x.conjugate_by(z), &y.conjugate_by(z)).unwrap();
        prop_assert_eq!(before, after);
    }

    /// Orbit-stabilizer: |class(x)| · |C(x)| = |G| in the oracle.
    #[test]
    fn orbit_stabilizer_identity(i in any::<usize>()) {
        let g = cached_group("U", 3, 2, &U32);
        let x = &g.elements[i % g.len()];
        let cent = ccg_core::brute_centralizer(g, x).len();
        let class: std::collections::HashSet<Vec<Fel>> = g
            .elements
            .iter()
            .map(|h| x.conjugate_by(h).entries().to_vec())
            .collect();
        prop_assert_eq!(cent * class.len(), g.len());
    }
}
