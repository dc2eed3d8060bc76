//! Group descriptors for the finite classical groups, their orders, element
//! membership, GL-class admissibility, and standard semisimple building
//! blocks.

use crate::error::{Error, Result};
use crate::field::{Fel, Field};
use crate::forms::{is_isometry, spinor_norm, Form, FormKind, TypeTag};
use crate::matrix::{elementary_divisors, left_kernel, ElementaryDivisorList, MatrixFq};
use crate::poly::{phi_classify, PhiClass, Poly};

/// The family of a classical group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    GL,
    SL,
    Sp,
    U,
    SU,
    O,
    SO,
    Omega,
}

impl Family {
    pub fn is_orthogonal(&self) -> bool {
        matches!(self, Family::O | Family::SO | Family::Omega)
    }

    pub fn is_unitary(&self) -> bool {
        matches!(self, Family::U | Family::SU)
    }

    /// The full isometry (or general linear) group containing this family.
    pub fn isometry_family(&self) -> Family {
        match self {
            Family::SL => Family::GL,
            Family::SU => Family::U,
            Family::SO | Family::Omega => Family::O,
            f => *f,
        }
    }
}

/// A concrete classical group: family, type tag (orthogonal only),
/// dimension, defining field parameter `q`, working field, and standard
/// form (absent for GL/SL).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    pub tag: TypeTag,
    pub n: usize,
    /// The defining parameter: `GL(n,q)`, `Sp(n,q)`, `U(n,q)` (matrices over
    /// `F_{q²}`), `O^ε(n,q)`.
    pub q: u64,
    pub field: Field,
    pub form: Option<Form>,
}

fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::InvalidSpec(format!("{q} is not a prime power")));
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > q {
        p = q;
    }
    let mut k = 0;
    let mut rem = q;
    while rem > 1 {
        if rem % p != 0 {
            return Err(Error::InvalidSpec(format!("{q} is not a prime power")));
        }
        rem /= p;
        k += 1;
    }
    Ok((p, k))
}

impl GroupSpec {
    /// Build a group with its library-standard form. Orthogonal families
    /// take an explicit type tag; others ignore it (pass `TypeTag::NA`).
    pub fn new(family: Family, tag: TypeTag, n: usize, q: u64) -> Result<GroupSpec> {
        if n == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        let (p, k) = factor_prime_power(q)?;
        let (field, form, tag) = match family {
            Family::GL | Family::SL => (Field::new(p, k)?, None, TypeTag::NA),
            Family::Sp => {
                let field = Field::new(p, k)?;
                (field.clone(), Some(Form::std_alternating(&field, n)?), TypeTag::NA)
            }
            Family::U | Family::SU => {
                let field = Field::with_bar(p, k)?;
                (field.clone(), Some(Form::std_hermitian(&field, n)?), TypeTag::NA)
            }
            Family::O | Family::SO | Family::Omega => {
                let field = Field::new(p, k)?;
                let expect_tag = if n % 2 == 0 {
                    if tag != TypeTag::Plus && tag != TypeTag::Minus {
                        return Err(Error::InvalidSpec(
                            "even-dimensional orthogonal groups need a ± type".into(),
                        ));
                    }
                    tag
                } else {
                    if tag != TypeTag::Circle && tag != TypeTag::NA {
                        return Err(Error::InvalidSpec(
                            "odd-dimensional orthogonal groups are circle type".into(),
                        ));
                    }
                    TypeTag::Circle
                };
                let form = Form::std_quadratic(&field, n, expect_tag, true)?;
                (field, Some(form), expect_tag)
            }
        };
        Ok(GroupSpec {
            family,
            tag,
            n,
            q,
            field,
            form,
        })
    }

    /// Parse a CLI-style group name: GL, SL, Sp, U, SU, O+, O-, O, SO+,
    /// SO-, SO, Omega+, Omega-, Omega.
    pub fn from_name(name: &str, n: usize, q: u64) -> Result<GroupSpec> {
        let (family, tag) = match name {
            "GL" => (Family::GL, TypeTag::NA),
            "SL" => (Family::SL, TypeTag::NA),
            "Sp" => (Family::Sp, TypeTag::NA),
            "U" => (Family::U, TypeTag::NA),
            "SU" => (Family::SU, TypeTag::NA),
            "O+" => (Family::O, TypeTag::Plus),
            "O-" => (Family::O, TypeTag::Minus),
            "O" => (Family::O, TypeTag::Circle),
            "SO+" => (Family::SO, TypeTag::Plus),
            "SO-" => (Family::SO, TypeTag::Minus),
            "SO" => (Family::SO, TypeTag::Circle),
            "Omega+" => (Family::Omega, TypeTag::Plus),
            "Omega-" => (Family::Omega, TypeTag::Minus),
            "Omega" => (Family::Omega, TypeTag::Circle),
            _ => return Err(Error::InvalidSpec(format!("unknown group name {name}"))),
        };
        GroupSpec::new(family, tag, n, q)
    }

    pub fn name(&self) -> String {
        let base = match self.family {
            Family::GL => "GL",
            Family::SL => "SL",
            Family::Sp => "Sp",
            Family::U => "U",
            Family::SU => "SU",
            Family::O => "O",
            Family::SO => "SO",
            Family::Omega => "Omega",
        };
        let sym = match self.tag {
            TypeTag::Plus => "+",
            TypeTag::Minus => "-",
            _ => "",
        };
        format!("{base}{sym}({},{})", self.n, self.q)
    }

    /// The group with the same form but the full isometry family.
    pub fn isometry_group(&self) -> GroupSpec {
        let mut g = self.clone();
        g.family = self.family.isometry_family();
        g
    }
}

/// Exact order of the group.
pub fn group_order(spec: &GroupSpec) -> u128 {
    let q = spec.q as u128;
    let n = spec.n;
    match spec.family {
        Family::GL => gl_order(n, q),
        Family::SL => gl_order(n, q) / (q - 1),
        Family::Sp => sp_order(n, q),
        Family::U => u_order(n, q),
        Family::SU => u_order(n, q) / (q + 1),
        Family::O => o_order(n, q, spec.tag),
        Family::SO => {
            let o = o_order(n, q, spec.tag);
            if spec.q % 2 == 0 {
                o
            } else {
                o / 2
            }
        }
        Family::Omega => {
            if n == 1 {
                return 1;
            }
            let o = o_order(n, q, spec.tag);
            if spec.q % 2 == 0 {
                o / 2
            } else {
                o / 4
            }
        }
    }
}

pub fn gl_order(n: usize, q: u128) -> u128 {
    let qn = q.pow(n as u32);
    (0..n).map(|i| qn - q.pow(i as u32)).product()
}

pub fn u_order(n: usize, q: u128) -> u128 {
    let mut acc = q.pow((n * (n - 1) / 2) as u32);
    for i in 1..=n as u32 {
        let term = if i % 2 == 0 { q.pow(i) - 1 } else { q.pow(i) + 1 };
        acc *= term;
    }
    acc
}

pub fn sp_order(n: usize, q: u128) -> u128 {
    assert!(n % 2 == 0);
    let m = (n / 2) as u32;
    let mut acc = q.pow(m * m);
    for i in 1..=m {
        acc *= q.pow(2 * i) - 1;
    }
    acc
}

pub fn o_order(n: usize, q: u128, tag: TypeTag) -> u128 {
    if n % 2 == 1 {
        // q odd only
        let m = (n / 2) as u32;
        let mut acc = 2 * q.pow(m * m);
        for i in 1..=m {
            acc *= q.pow(2 * i) - 1;
        }
        acc
    } else {
        let m = (n / 2) as u32;
        let eps_term = match tag {
            TypeTag::Plus => q.pow(m) - 1,
            TypeTag::Minus => q.pow(m) + 1,
            _ => panic!("even-dimensional orthogonal group needs ± type"),
        };
        let mut acc = 2 * q.pow(m * (m - 1)) * eps_term;
        for i in 1..m {
            acc *= q.pow(2 * i) - 1;
        }
        acc
    }
}

/// Membership test for `X` in the group.
pub fn contains(spec: &GroupSpec, x: &MatrixFq) -> bool {
    if x.n() != spec.n || *x.field() != spec.field {
        return false;
    }
    match spec.family {
        Family::GL => x.is_invertible(),
        Family::SL => x.det() == 1,
        Family::Sp | Family::U | Family::O => is_isometry(x, spec.form.as_ref().unwrap()),
        Family::SU | Family::SO => {
            is_isometry(x, spec.form.as_ref().unwrap()) && x.det() == 1
        }
        Family::Omega => {
            let form = spec.form.as_ref().unwrap();
            is_isometry(x, form)
                && x.det() == 1
                && spinor_norm(x, form).map(|t| t == 0).unwrap_or(false)
        }
    }
}

/// Which isometry groups can contain a GL-class with the given elementary
/// divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub admissible: bool,
    /// For quadratic kinds: the set of form types the class can preserve.
    pub allowed_types: Vec<TypeTag>,
}

/// Class admissibility per form kind: the similarity condition
/// `X ∼ X^{*-1}` plus the parity clauses on `(t ± 1)`-divisors, and the
/// allowed quadratic form types.
pub fn gl_class_admissible(
    eds: &ElementaryDivisorList,
    kind: FormKind,
    field: &Field,
) -> MembershipReport {
    let none = MembershipReport {
        admissible: false,
        allowed_types: vec![],
    };
    // Similarity with the conjugate-inverse-transpose: the divisor multiset
    // must be closed under f ↦ f*.
    for (f, e, m) in &eds.items {
        let Ok(dual) = f.dual() else {
            return none;
        };
        let matched = eds
            .items
            .iter()
            .any(|(g, eg, mg)| *g == dual.monic() && eg == e && mg == m);
        if !matched {
            return none;
        }
    }
    let p_even = field.p() == 2;
    let is_t_pm_1 = |f: &Poly| -> bool {
        f.degree() == 1 && {
            let lam = field.neg(f.coeff(0));
            lam == 1 || lam == field.neg(1)
        }
    };
    match kind {
        FormKind::Hermitian => MembershipReport {
            admissible: true,
            allowed_types: vec![],
        },
        FormKind::Alternating => {
            for (f, e, m) in &eds.items {
                if is_t_pm_1(f) && e % 2 == 1 && m % 2 == 1 {
                    return none;
                }
            }
            MembershipReport {
                admissible: true,
                allowed_types: vec![],
            }
        }
        FormKind::Quadratic | FormKind::Symmetric => {
            let mut both_types = false;
            for (f, e, m) in &eds.items {
                if !is_t_pm_1(f) {
                    continue;
                }
                if p_even {
                    // every (t+1)^{2k+1} has even multiplicity
                    if e % 2 == 1 && m % 2 == 1 {
                        return none;
                    }
                    both_types = true;
                } else {
                    // every (t±1)^{2k}, k ≥ 1, has even multiplicity
                    if e % 2 == 0 && m % 2 == 1 {
                        return none;
                    }
                    if e % 2 == 1 {
                        both_types = true;
                    }
                }
            }
            let n = eds.total_degree();
            let allowed = if n % 2 == 1 {
                vec![TypeTag::Circle]
            } else if both_types {
                vec![TypeTag::Plus, TypeTag::Minus]
            } else {
                // single type from the Φ₃ exponent parity
                let mut s = 0usize;
                for (f, e, m) in &eds.items {
                    if phi_classify(f) == Ok(PhiClass::Phi3) {
                        s += e * m;
                    }
                }
                if s % 2 == 0 {
                    vec![TypeTag::Plus]
                } else {
                    vec![TypeTag::Minus]
                }
            };
            MembershipReport {
                admissible: true,
                allowed_types: allowed,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Standard semisimple blocks (one generalized elementary divisor).
// ---------------------------------------------------------------------------

/// Scalar (Φ₁) block `λ·I_m` with the standard form of the requested kind;
/// `tag`/`square_disc` select the quadratic form variant.
pub fn phi1_block(
    field: &Field,
    lambda: Fel,
    kind: FormKind,
    mult: usize,
    tag: TypeTag,
    square_disc: bool,
) -> Result<(MatrixFq, Form)> {
    let form = match kind {
        FormKind::Alternating => Form::std_alternating(field, mult)?,
        FormKind::Hermitian => Form::std_hermitian(field, mult)?,
        FormKind::Symmetric => Form::std_symmetric(field, mult, tag, square_disc)?,
        FormKind::Quadratic => Form::std_quadratic(field, mult, tag, square_disc)?,
    };
    // λ must be an isometry scalar: λλ̄ = 1
    if field.mul(lambda, field.bar(lambda)) != 1 {
        return Err(Error::InvalidSpec("Φ₁ scalar must satisfy λ·λ̄ = 1".into()));
    }
    let x = MatrixFq::scalar(field, mult, lambda);
    debug_assert!(is_isometry(&x, &form));
    Ok((x, form))
}

/// Φ₂ block for `f = g·g*` with `g ≠ g*` irreducible:
/// `X = diag(R, R^{*-1})`, `B = [[0, I], [ε·I, 0]]` with ε = −1 alternating,
/// +1 symmetric/hermitian, and the quadratic representative `[[0, I], [0, 0]]`.
pub fn phi2_block(g: &Poly, kind: FormKind) -> Result<(MatrixFq, Form)> {
    let field = g.field().clone();
    let d = g.degree();
    let r = MatrixFq::companion(g);
    let rsi = r.star().inverse()?;
    let mut x = MatrixFq::zero(&field, 2 * d);
    x.set_block(0, 0, &r);
    x.set_block(d, d, &rsi);
    let mut b = MatrixFq::zero(&field, 2 * d);
    for i in 0..d {
        b.set(i, d + i, 1);
    }
    let form = match kind {
        FormKind::Quadratic => Form::new(FormKind::Quadratic, b)?,
        FormKind::Alternating => {
            for i in 0..d {
                b.set(d + i, i, field.neg(1));
            }
            Form::new(FormKind::Alternating, b)?
        }
        FormKind::Symmetric | FormKind::Hermitian => {
            for i in 0..d {
                b.set(d + i, i, 1);
            }
            Form::new(kind, b)?
        }
    };
    debug_assert!(is_isometry(&x, &form));
    Ok((x, form))
}

/// Φ₃ block: `f = f*` irreducible of degree > 1; `X` has the single
/// elementary divisor `f` and preserves the returned form.
pub fn phi3_block(f: &Poly, kind: FormKind) -> Result<(MatrixFq, Form)> {
    match kind {
        FormKind::Alternating => phi3_symplectic(f),
        FormKind::Quadratic => phi3_quadratic(f),
        FormKind::Symmetric => {
            // q odd: derive from the quadratic block's polar form
            let (x, q) = phi3_quadratic(f)?;
            let field = f.field().clone();
            let half = field.inv(field.add(1, 1))?;
            let b = q.polar().scale(half);
            let form = Form::new(FormKind::Symmetric, b.scale(field.add(1, 1)))?;
            debug_assert!(is_isometry(&x, &form));
            Ok((x, form))
        }
        FormKind::Hermitian => phi3_unitary(f),
    }
}

/// Palindromic coefficients `a_1..a_d` of a self-dual
/// `f = 1 + a_1 t + … + a_d t^d + a_{d-1} t^{d+1} + … + t^{2d}`.
fn palindromic_coeffs(f: &Poly) -> Result<Vec<Fel>> {
    let deg = f.degree();
    if deg % 2 != 0 || f.coeff(0) != 1 || !f.is_monic() {
        return Err(Error::InvalidSpec("not a self-dual Φ₃ polynomial".into()));
    }
    let d = deg / 2;
    for i in 0..=deg {
        if f.coeff(i) != f.coeff(deg - i) {
            return Err(Error::InvalidSpec("not palindromic".into()));
        }
    }
    Ok((1..=d).map(|i| f.coeff(i)).collect())
}

/// Pick the orientation of the companion matrix that is an isometry.
fn oriented_companion(f: &Poly, form: &Form) -> Result<MatrixFq> {
    let c = MatrixFq::companion(f);
    if is_isometry(&c, form) {
        return Ok(c);
    }
    let ct = c.transpose();
    if is_isometry(&ct, form) {
        return Ok(ct);
    }
    Err(Error::InvalidSpec(
        "companion matrix does not preserve the constructed form".into(),
    ))
}

fn phi3_symplectic(f: &Poly) -> Result<(MatrixFq, Form)> {
    let field = f.field().clone();
    let a = palindromic_coeffs(f)?; // a_1..a_d
    let d = a.len();
    // P upper triangular with constant upper diagonals 1, a_1, …, a_{d-1}
    let coef = |off: usize| -> Fel {
        if off == 0 {
            1
        } else {
            a[off - 1]
        }
    };
    let p = MatrixFq::from_fn(&field, d, |i, j| if j >= i { coef(j - i) } else { 0 });
    let mut b = MatrixFq::zero(&field, 2 * d);
    let pt = p.transpose();
    for i in 0..d {
        for j in 0..d {
            b.set(i, d + j, field.neg(pt.get(i, j)));
            b.set(d + i, j, p.get(i, j));
        }
    }
    let form = Form::new(FormKind::Alternating, b)?;
    let x = oriented_companion(f, &form)?;
    debug_assert_eq!(
        elementary_divisors(&x)?.items,
        vec![(f.monic(), 1, 1)]
    );
    Ok((x, form))
}

fn phi3_quadratic(f: &Poly) -> Result<(MatrixFq, Form)> {
    let field = f.field().clone();
    let deg = f.degree();
    if deg == 2 {
        // f = t² + a t + 1 → A = [[1, −a], [0, 1]]
        let a = f.coeff(1);
        let mut m = MatrixFq::identity(&field, 2);
        m.set(0, 1, field.neg(a));
        let form = Form::new(FormKind::Quadratic, m)?;
        let x = oriented_companion(f, &form)?;
        return Ok((x, form));
    }
    palindromic_coeffs(f)?; // validates self-duality
    // For deg > 2 the invariant quadratic representative is obtained by
    // solving the invariance system X·A·Xᵗ − A ∈ {alternating} directly for
    // the upper-triangular unknowns of A; the first nondegenerate solution
    // in a fixed enumeration order is taken.
    let x = MatrixFq::companion(f);
    let form = invariant_quadratic_form(&x)?;
    debug_assert_eq!(elementary_divisors(&x)?.items, vec![(f.monic(), 1, 1)]);
    Ok((x, form))
}

/// Solve for a nondegenerate quadratic form preserved by `x`:
/// the upper-triangular entries of `A` satisfying
/// "`X·A·Xᵗ − A` is alternating", a linear system; deterministic.
pub fn invariant_quadratic_form(x: &MatrixFq) -> Result<Form> {
    let field = x.field().clone();
    let n = x.n();
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut rows = vec![];
    for &(i, j) in &idx {
        let mut a = MatrixFq::zero(&field, n);
        a.set(i, j, 1);
        let s = x.mul(&a).mul(&x.transpose()).sub(&a);
        // constraints: s symmetric-with-zero-diagonal residuals must vanish
        let mut row = vec![];
        for r in 0..n {
            row.push(s.get(r, r));
            for c in r + 1..n {
                row.push(field.add(s.get(r, c), s.get(c, r)));
            }
        }
        rows.push(row);
    }
    let kernel = left_kernel(&field, &rows);
    let q = field.q();
    let total = q.pow(kernel.len() as u32);
    for combo in 1..total {
        let mut a = MatrixFq::zero(&field, n);
        let mut rem = combo;
        for basis_vec in &kernel {
            let c = field.elements().nth((rem % q) as usize).unwrap();
            rem /= q;
            if c == 0 {
                continue;
            }
            for (&(i, j), &v) in idx.iter().zip(basis_vec) {
                let cur = a.get(i, j);
                a.set(i, j, field.add(cur, field.mul(c, v)));
            }
        }
        if let Ok(form) = Form::new(FormKind::Quadratic, a) {
            debug_assert!(is_isometry(x, &form));
            return Ok(form);
        }
    }
    Err(Error::InvalidSpec(
        "no invariant nondegenerate quadratic form exists".into(),
    ))
}

fn phi3_unitary(f: &Poly) -> Result<(MatrixFq, Form)> {
    let field = f.field().clone();
    if !field.has_bar() {
        return Err(Error::NoBar);
    }
    let deg = f.degree();
    if deg % 2 != 1 || deg < 3 {
        return Err(Error::InvalidSpec(
            "unitary Φ₃ polynomials have odd degree > 1".into(),
        ));
    }
    let d = (deg - 1) / 2;
    // f = a_0 + a_1 t + … + a_d t^d + a_0·t^{d+1}·(ā_d + … + ā_0 t^d)
    let a: Vec<Fel> = (0..=d).map(|i| f.coeff(i)).collect();
    // b_0 with b_0^{q-1} = a_0^{-1}  (q = |fixed field|)
    let q0 = field.bar_fixed_order().ok_or(Error::NoBar)?;
    let target = field.inv(a[0])?;
    let b0 = field
        .elements()
        .find(|&b| b != 0 && field.pow(b, q0 - 1) == target)
        .ok_or(Error::InvalidSpec("no (q−1)-th root for b₀".into()))?;
    let mut b = vec![b0];
    for i in 1..=d {
        let mut s = 0;
        for &aj in a.iter().take(i + 1) {
            s = field.add(s, aj);
        }
        b.push(field.mul(field.bar(b0), s));
    }
    // c with c^{q+1} = b_d + b̄_d
    let tgt = field.add(b[d], field.bar(b[d]));
    let c = if tgt == 0 {
        0
    } else {
        field.solve_norm_equation(tgt)?
    };
    let n = 2 * d + 1;
    let inv_b0_bar = field.inv(field.bar(b0))?;
    let mut x = MatrixFq::zero(&field, n);
    for i in 0..d.saturating_sub(1) {
        x.set(i, i + 1, 1);
    }
    x.set(d - 1, n - 1, inv_b0_bar);
    x.set(d, d, 1);
    x.set(d, n - 1, field.neg(field.mul(field.bar(c), inv_b0_bar)));
    for (j, bj) in b.iter().enumerate().take(d) {
        x.set(d + 1, j, *bj);
    }
    x.set(d + 1, d, c);
    x.set(d + 1, n - 1, field.neg(field.mul(field.bar(b[d]), inv_b0_bar)));
    for r in d + 2..n {
        x.set(r, r - 1, 1);
        let idx = n - r; // b̄_{d-1} … b̄_1
        x.set(r, n - 1, field.neg(field.mul(field.bar(b[idx]), inv_b0_bar)));
    }
    let form = Form::std_hermitian(&field, n)?;
    if !is_isometry(&x, &form) {
        return Err(Error::InvalidSpec(
            "unitary Φ₃ construction failed the isometry check".into(),
        ));
    }
    debug_assert_eq!(elementary_divisors(&x)?.items, vec![(f.monic(), 1, 1)]);
    Ok((x, form))
}

/// Standard block for a single generalized elementary divisor `f` of
/// multiplicity 1: dispatch on the Φ-class of `f`.
pub fn standard_semisimple_block(f: &Poly, kind: FormKind) -> Result<(MatrixFq, Form)> {
    match phi_classify(f)? {
        PhiClass::Phi1 => {
            let field = f.field().clone();
            let lambda = field.neg(f.coeff(0));
            phi1_block(&field, lambda, kind, 1, TypeTag::Circle, true)
        }
        PhiClass::Phi2 { g } => phi2_block(&g, kind),
        PhiClass::Phi3 => phi3_block(f, kind),
        PhiClass::None => Err(Error::InvalidSpec("polynomial is not in Φ".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::monic_irreducibles;

    #[test]
    fn order_formulas() {
        let gl23 = GroupSpec::new(Family::GL, TypeTag::NA, 2, 3).unwrap();
        assert_eq!(group_order(&gl23), 48);
        let sp43 = GroupSpec::new(Family::Sp, TypeTag::NA, 4, 3).unwrap();
        assert_eq!(group_order(&sp43), 51840);
        let u22 = GroupSpec::new(Family::U, TypeTag::NA, 2, 2).unwrap();
        assert_eq!(group_order(&u22), 18);
        let su22 = GroupSpec::new(Family::SU, TypeTag::NA, 2, 2).unwrap();
        assert_eq!(group_order(&su22), 6);
        let op42 = GroupSpec::new(Family::O, TypeTag::Plus, 4, 2).unwrap();
        assert_eq!(group_order(&op42), 72);
        let om42 = GroupSpec::new(Family::O, TypeTag::Minus, 4, 2).unwrap();
        assert_eq!(group_order(&om42), 120);
        let o33 = GroupSpec::new(Family::O, TypeTag::Circle, 3, 3).unwrap();
        assert_eq!(group_order(&o33), 48);
        let so33 = GroupSpec::new(Family::SO, TypeTag::Circle, 3, 3).unwrap();
        assert_eq!(group_order(&so33), 24);
        let omega33 = GroupSpec::new(Family::Omega, TypeTag::Circle, 3, 3).unwrap();
        assert_eq!(group_order(&omega33), 12);
    }

    #[test]
    fn contains_basics() {
        for spec in [
            GroupSpec::new(Family::GL, TypeTag::NA, 2, 3).unwrap(),
            GroupSpec::new(Family::SL, TypeTag::NA, 2, 3).unwrap(),
            GroupSpec::new(Family::Sp, TypeTag::NA, 2, 3).unwrap(),
            GroupSpec::new(Family::U, TypeTag::NA, 2, 2).unwrap(),
            GroupSpec::new(Family::SU, TypeTag::NA, 2, 2).unwrap(),
            GroupSpec::new(Family::O, TypeTag::Plus, 2, 3).unwrap(),
            GroupSpec::new(Family::SO, TypeTag::Minus, 2, 3).unwrap(),
            GroupSpec::new(Family::Omega, TypeTag::Circle, 3, 3).unwrap(),
        ] {
            let id = MatrixFq::identity(&spec.field, spec.n);
            assert!(contains(&spec, &id), "identity not in {}", spec.name());
        }
        // all isometries of an alternating form have det 1
        let sp = GroupSpec::new(Family::Sp, TypeTag::NA, 2, 3).unwrap();
        let f3 = sp.field.clone();
        for enc in 0..81u64 {
            let mut e = enc;
            let mut x = MatrixFq::zero(&f3, 2);
            for i in 0..2 {
                for j in 0..2 {
                    x.set(i, j, e % 3);
                    e /= 3;
                }
            }
            if contains(&sp, &x) {
                assert_eq!(x.det(), 1);
            }
        }
    }

    #[test]
    fn admissibility_examples() {
        let f3 = Field::new(3, 1).unwrap();
        // (t−1) with odd multiplicity is not symplectic
        let ed1 = ElementaryDivisorList {
            items: vec![(Poly::new(&f3, vec![2, 1]), 1, 3)],
        };
        assert!(!gl_class_admissible(&ed1, FormKind::Alternating, &f3).admissible);
        let ed2 = ElementaryDivisorList {
            items: vec![(Poly::new(&f3, vec![2, 1]), 1, 2)],
        };
        assert!(gl_class_admissible(&ed2, FormKind::Alternating, &f3).admissible);
        // (t²+1) over F_3, orthogonal: admissible with minus type only
        let ed3 = ElementaryDivisorList {
            items: vec![(Poly::new(&f3, vec![1, 0, 1]), 1, 1)],
        };
        let rep = gl_class_admissible(&ed3, FormKind::Quadratic, &f3);
        assert!(rep.admissible);
        assert_eq!(rep.allowed_types, vec![TypeTag::Minus]);
        // (t−1)² with multiplicity 1, orthogonal q odd: inadmissible
        let ed4 = ElementaryDivisorList {
            items: vec![(Poly::new(&f3, vec![2, 1]), 2, 1)],
        };
        assert!(!gl_class_admissible(&ed4, FormKind::Quadratic, &f3).admissible);
        // non-self-dual-closed multiset: t−γ alone over F_5 (γ² ≠ 1)
        let f5 = Field::new(5, 1).unwrap();
        let ed5 = ElementaryDivisorList {
            items: vec![(Poly::new(&f5, vec![3, 1]), 1, 1)],
        };
        assert!(!gl_class_admissible(&ed5, FormKind::Alternating, &f5).admissible);
        // the dual pair (t−2)(t−3) over F_5 is admissible (Φ₂)
        let ed6 = ElementaryDivisorList {
            items: vec![
                (Poly::new(&f5, vec![3, 1]), 1, 1),
                (Poly::new(&f5, vec![2, 1]), 1, 1),
            ],
        };
        assert!(gl_class_admissible(&ed6, FormKind::Alternating, &f5).admissible);
    }

    #[test]
    fn phi2_block_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let g = Poly::new(&f5, vec![3, 1]); // t + 3 = t − 2
        for kind in [FormKind::Alternating, FormKind::Symmetric, FormKind::Quadratic] {
            let (x, form) = phi2_block(&g, kind).unwrap();
            assert!(is_isometry(&x, &form));
            let eds = elementary_divisors(&x).unwrap();
            assert_eq!(eds.items.len(), 2);
        }
    }

    #[test]
    fn phi3_quadratic_deg2_example() {
        // f = t²+1 over F_3 → X = companion, A = identity (a = 0)
        let f3 = Field::new(3, 1).unwrap();
        let f = Poly::new(&f3, vec![1, 0, 1]);
        let (x, form) = phi3_block(&f, FormKind::Quadratic).unwrap();
        assert_eq!(x, MatrixFq::companion(&f));
        assert_eq!(*form.gram(), MatrixFq::identity(&f3, 2));
        assert!(is_isometry(&x, &form));
        assert_eq!(crate::forms::form_type(&form).unwrap(), TypeTag::Minus);
    }

    #[test]
    fn phi3_blocks_sweep() {
        // every Φ₃ polynomial of degree ≤ 4 over small fields yields a valid
        // block in each applicable kind
        for q in [2u64, 3, 5] {
            let field = Field::new(q, 1).unwrap();
            for d in [2usize, 4] {
                for f in monic_irreducibles(&field, d) {
                    if !f.is_self_dual() {
                        continue;
                    }
                    let kinds: Vec<FormKind> = if q == 2 {
                        vec![FormKind::Alternating, FormKind::Quadratic]
                    } else {
                        vec![FormKind::Alternating, FormKind::Quadratic, FormKind::Symmetric]
                    };
                    for kind in kinds {
                        let (x, form) = phi3_block(&f, kind)
                            .unwrap_or_else(|e| panic!("{f:?} {kind:?}: {e}"));
                        assert!(is_isometry(&x, &form), "{f:?} {kind:?}");
                        assert_eq!(
                            elementary_divisors(&x).unwrap().items,
                            vec![(f.clone(), 1, 1)]
                        );
                        if kind == FormKind::Quadratic {
                            assert_eq!(
                                crate::forms::form_type(&form).unwrap(),
                                TypeTag::Minus
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn phi3_unitary_sweep() {
        // self-dual irreducible cubics over F_4 and F_9
        for (p, k) in [(2u64, 1u32), (3, 1)] {
            let field = Field::with_bar(p, k).unwrap();
            let mut found = 0;
            for f in monic_irreducibles(&field, 3) {
                if !f.is_self_dual() {
                    continue;
                }
                found += 1;
                let (x, form) = phi3_block(&f, FormKind::Hermitian)
                    .unwrap_or_else(|e| panic!("{f:?}: {e}"));
                assert!(is_isometry(&x, &form));
                assert_eq!(
                    elementary_divisors(&x).unwrap().items,
                    vec![(f.clone(), 1, 1)]
                );
            }
            assert!(found > 0, "no unitary Φ₃ cubics found over F_{}²", p.pow(k));
        }
    }

    #[test]
    fn phi1_and_dispatch() {
        let f3 = Field::new(3, 1).unwrap();
        // scalar −1 in a 2-dim alternating block
        let (x, form) = phi1_block(&f3, 2, FormKind::Alternating, 2, TypeTag::NA, true).unwrap();
        assert!(is_isometry(&x, &form));
        // dispatch on f = t−1 → 1×1 quadratic impossible in char 2, fine over F_3 odd dim
        let f = Poly::new(&f3, vec![2, 1]);
        let (x, form) = standard_semisimple_block(&f, FormKind::Symmetric).unwrap();
        assert!(x.is_identity());
        assert!(is_isometry(&x, &form));
    }
}
