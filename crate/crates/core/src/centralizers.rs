//! Centralizer orders and structure: the unipotent-radical/reductive
//! factorization `C = U ⋊ R`, exact order formulas per family, and explicit
//! generating sets.

use crate::classes::{ClassLabel, UnipotentLabel};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::{form_type, Form, FormKind, TypeTag};
use crate::groups::{gl_order, group_order, o_order, sp_order, u_order, Family, GroupSpec};
use crate::poly::PhiClass;

/// Group a partition into `(size, multiplicity)` pairs, sizes ascending.
fn partition_groups(partition: &[usize]) -> Vec<(usize, usize)> {
    let mut sorted = partition.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<(usize, usize)> = Vec::new();
    for part in sorted {
        match out.last_mut() {
            Some((n, r)) if *n == part => *r += 1,
            _ => out.push((part, 1)),
        }
    }
    out
}

/// `|C_{GL(m,q)}(u)|` for a unipotent `u` with the given Jordan partition:
/// `q^γ · Π_i |GL(r_i, q)|` with `γ = 2·Σ_{i<j} n_i r_i r_j + Σ_i (n_i−1)r_i²`
/// over the distinct part sizes `n_i` with multiplicities `r_i`.
pub fn gl_unipotent_centralizer_order(q: u128, partition: &[usize]) -> u128 {
    let groups = partition_groups(partition);
    let mut gamma: u128 = 0;
    for (i, &(ni, ri)) in groups.iter().enumerate() {
        gamma += ((ni - 1) * ri * ri) as u128;
        for &(nj, rj) in &groups[..i] {
            gamma += 2 * (nj * rj * ri) as u128;
        }
    }
    let mut order = q.pow(gamma as u32);
    for &(_, ri) in &groups {
        order *= gl_order(ri, q);
    }
    order
}

/// `|C_{U(m,q)}(u)|` for a unipotent `u` with the given Jordan partition:
/// the unitary case has `δ = 0`, `|U| = (q²)^γ` and `R = Π U(r_i, q)`.
pub fn u_unipotent_centralizer_order(q: u128, partition: &[usize]) -> u128 {
    let groups = partition_groups(partition);
    // γ doubled because |F| = q²: 2γ = 2·Σ_{i<j} n_i r_i r_j + Σ (n_i−1)r_i².
    let mut two_gamma: u128 = 0;
    for (i, &(ni, ri)) in groups.iter().enumerate() {
        two_gamma += ((ni - 1) * ri * ri) as u128;
        for &(nj, rj) in &groups[..i] {
            two_gamma += 2 * (nj * rj * ri) as u128;
        }
    }
    let mut order = q.pow(two_gamma as u32);
    for &(_, ri) in &groups {
        order *= u_order(ri, q);
    }
    order
}

/// Order of the orthogonal group on a diagonal form `diag(b, 1, …, 1)` of
/// dimension `a` over `F_q` (q odd).
fn o_diag_order(field: &Field, a: usize, b: u64) -> u128 {
    let q = field.q() as u128;
    if a == 1 {
        return 2;
    }
    let mut gram = crate::matrix::MatrixFq::identity(field, a);
    gram.set(0, 0, b);
    let form = Form::new(FormKind::Symmetric, gram).expect("nondegenerate diagonal form");
    let tag = if a % 2 == 1 {
        TypeTag::Circle
    } else {
        form_type(&form).expect("typed form")
    };
    o_order(a, q, tag)
}

/// `|C_𝒞(u)|` for unipotent `u` in a symplectic or orthogonal group, q odd:
/// `q^γ · Π O^ε(a_i,q) · Π Sp(2c_j,q)`.
pub fn spo_unipotent_centralizer_order_odd(
    field: &Field,
    alternating: bool,
    label: &UnipotentLabel,
) -> Result<u128> {
    let UnipotentLabel::OddChar { v, w } = label else {
        return Err(Error::InvalidSpec("odd-characteristic label expected".into()));
    };
    let q = field.q() as u128;
    // Jordan sizes with multiplicities (V: size × mult, W: size × 2·mult).
    let mut parts: Vec<usize> = Vec::new();
    for &(size, _, mult) in v {
        parts.extend(std::iter::repeat(size).take(mult));
    }
    for &(size, mult) in w {
        parts.extend(std::iter::repeat(size).take(2 * mult));
    }
    let groups = partition_groups(&parts);
    // γ = Σ_{i<j} n_i r_i r_j + ½ Σ (n_i−1) r_i² + (δ/2) Σ_{n_i even} r_i
    let delta: i64 = if alternating { 1 } else { -1 };
    let mut two_gamma: i64 = 0;
    for (i, &(ni, ri)) in groups.iter().enumerate() {
        two_gamma += ((ni - 1) * ri * ri) as i64;
        if ni % 2 == 0 {
            two_gamma += delta * ri as i64;
        }
        for &(nj, rj) in &groups[..i] {
            two_gamma += 2 * (nj * rj * ri) as i64;
        }
    }
    debug_assert!(two_gamma >= 0 && two_gamma % 2 == 0);
    let mut order = q.pow((two_gamma / 2) as u32);
    for &(_, b, mult) in v {
        order *= o_diag_order(field, mult, b);
    }
    for &(_, mult) in w {
        order *= sp_order(2 * mult, q);
    }
    Ok(order)
}

/// `|C_𝒞(u)|` for unipotent `u` in a symplectic or orthogonal group, q even.
pub fn spo_unipotent_centralizer_order_even(
    q: u128,
    alternating: bool,
    label: &UnipotentLabel,
) -> Result<u128> {
    let UnipotentLabel::EvenChar { w, v, w_alpha, v_alpha, .. } = label else {
        return Err(Error::InvalidSpec("even-characteristic label expected".into()));
    };
    // Merge W with W_α and V with V_α: a_i per W-size, b_j per V-size.
    let mut w_all: Vec<(usize, usize, bool)> = Vec::new(); // (m_i, a_i, has_alpha)
    for &(m, a) in w {
        w_all.push((m, a, false));
    }
    for &m in w_alpha {
        match w_all.iter_mut().find(|(mi, _, _)| *mi == m) {
            Some(entry) => {
                entry.1 += 1;
                entry.2 = true;
            }
            None => w_all.push((m, 1, true)),
        }
    }
    w_all.sort_unstable();
    let mut v_all: Vec<(usize, usize)> = Vec::new(); // (2k_j, b_j)
    for &(two_k, c) in v {
        v_all.push((two_k, c));
    }
    for &two_k in v_alpha {
        match v_all.iter_mut().find(|(kj, _)| *kj == two_k) {
            Some(entry) => entry.1 += 1,
            None => v_all.push((two_k, 1)),
        }
    }
    v_all.sort_unstable_by(|a, b| b.cmp(a)); // k_1 > k_2 > …

    // L: all Jordan sizes, descending, tagged by origin (true = W block).
    let mut l: Vec<(usize, bool)> = Vec::new();
    for &(m, a, _) in &w_all {
        l.extend(std::iter::repeat((m, true)).take(2 * a));
    }
    for &(two_k, b) in &v_all {
        l.extend(std::iter::repeat((two_k, false)).take(b));
    }
    l.sort_unstable_by(|a, b| b.0.cmp(&a.0));

    let sigma: i64 = if alternating { -1 } else { 1 };
    let v_sizes: Vec<usize> = v_all.iter().map(|&(two_k, _)| two_k).collect();
    let chi = |size: usize, from_w: bool| -> i64 {
        if !from_w {
            let k = (size / 2) as i64;
            if alternating {
                k
            } else {
                k + 1
            }
        } else {
            let s = size as i64;
            if size % 2 == 1 {
                (s + sigma) / 2
            } else if v_sizes.contains(&size) {
                (s + sigma + 1) / 2
            } else {
                (s + sigma - 1) / 2
            }
        }
    };
    let mut gamma: i64 = 0;
    for (nu, &(size, from_w)) in l.iter().enumerate() {
        gamma += (nu as i64 + 1) * size as i64 - chi(size, from_w);
    }
    let in_s = |m: usize| -> bool {
        m % 2 == 0
            || v_sizes.iter().any(|&two_k| m + 1 == two_k || m == two_k + 1)
            || (m == 1 && alternating)
    };
    for &(m, a, _) in &w_all {
        gamma -= 2 * (a * a) as i64;
        if in_s(m) {
            gamma -= a as i64;
        } else {
            gamma += a as i64;
        }
    }
    debug_assert!(gamma >= 0);
    let mut order = q.pow(gamma as u32);
    for &(m, a, has_alpha) in &w_all {
        if in_s(m) {
            order *= sp_order(2 * a, q);
        } else {
            let tag = if has_alpha { TypeTag::Minus } else { TypeTag::Plus };
            order *= o_order(2 * a, q, tag);
        }
    }
    // Z₂^{t+δ}
    let s = v_all.len();
    let mut z2 = 0u32;
    for j in 0..s.saturating_sub(1) {
        if v_all[j].0 / 2 - v_all[j + 1].0 / 2 >= 2 {
            z2 += 1;
        }
    }
    let delta_zero = s == 0 || (alternating && v_all[s - 1].0 / 2 == 1);
    if !delta_zero {
        z2 += 1;
    }
    Ok(order << z2)
}

/// Order of the centralizer of a class (given by its label) in the ambient
/// group: GL for GL/SL, U for U/SU, Sp for Sp, O for O/SO/Ω. Blockwise per
/// generalized elementary divisor: Φ₂ factors are GL over the extension,
/// Φ₃ factors are unitary over the extension.
pub fn ambient_centralizer_order(spec: &GroupSpec, label: &ClassLabel) -> Result<u128> {
    let q = spec.q as u128;
    let mut order: u128 = 1;
    for div in &label.divisors {
        let factor = match spec.family {
            Family::GL | Family::SL => {
                let UnipotentLabel::Partition(parts) = &div.unipotent else {
                    return Err(Error::InvalidSpec("partition label expected".into()));
                };
                gl_unipotent_centralizer_order(q.pow(div.f.degree() as u32), parts)
            }
            Family::U | Family::SU => match &div.phi {
                PhiClass::Phi1 => {
                    let UnipotentLabel::Partition(parts) = &div.unipotent else {
                        return Err(Error::InvalidSpec("partition label expected".into()));
                    };
                    u_unipotent_centralizer_order(q, parts)
                }
                PhiClass::Phi2 { g } => {
                    let UnipotentLabel::Partition(parts) = &div.unipotent else {
                        return Err(Error::InvalidSpec("partition label expected".into()));
                    };
                    gl_unipotent_centralizer_order(q.pow(2 * g.degree() as u32), parts)
                }
                PhiClass::Phi3 => {
                    let UnipotentLabel::Partition(parts) = &div.unipotent else {
                        return Err(Error::InvalidSpec("partition label expected".into()));
                    };
                    u_unipotent_centralizer_order(q.pow(div.f.degree() as u32), parts)
                }
                PhiClass::None => return Err(Error::InvalidSpec("missing Φ class".into())),
            },
            Family::Sp | Family::O | Family::SO | Family::Omega => {
                let alternating = spec.family == Family::Sp;
                match &div.phi {
                    PhiClass::Phi1 => {
                        if spec.q % 2 == 1 {
                            spo_unipotent_centralizer_order_odd(
                                &spec.field,
                                alternating,
                                &div.unipotent,
                            )?
                        } else {
                            spo_unipotent_centralizer_order_even(
                                q,
                                alternating,
                                &div.unipotent,
                            )?
                        }
                    }
                    PhiClass::Phi2 { g } => {
                        let UnipotentLabel::Partition(parts) = &div.unipotent else {
                            return Err(Error::InvalidSpec("partition label expected".into()));
                        };
                        gl_unipotent_centralizer_order(q.pow(g.degree() as u32), parts)
                    }
                    PhiClass::Phi3 => {
                        let UnipotentLabel::Partition(parts) = &div.unipotent else {
                            return Err(Error::InvalidSpec("partition label expected".into()));
                        };
                        u_unipotent_centralizer_order(q.pow(div.f.degree() as u32 / 2), parts)
                    }
                    PhiClass::None => return Err(Error::InvalidSpec("missing Φ class".into())),
                }
            }
        };
        order *= factor;
    }
    Ok(order)
}

/// Size of the conjugacy class with this label in `spec`, together with the
/// centralizer order in `spec`: the ambient class size divided by the number
/// of classes it splits into.
pub fn class_size_and_centralizer(
    spec: &GroupSpec,
    label: &ClassLabel,
    split: usize,
) -> Result<(u128, u128)> {
    let ambient = spec.isometry_group();
    let amb_centralizer = ambient_centralizer_order(spec, label)?;
    let amb_size = group_order(&ambient) / amb_centralizer;
    let size = amb_size / split as u128;
    let centralizer = group_order(spec) / size;
    Ok((size, centralizer))
}

// ---------------------------------------------------------------------------
// Symbolic structure
// ---------------------------------------------------------------------------

/// Full description of a centralizer `C_G(x) = U ⋊ R`: its exact order in
/// `G`, the order of the unipotent radical `U`, the symbolic reductive
/// factors of the ambient centralizer, and a generating set.
#[derive(Clone, Debug)]
pub struct CentralizerDescription {
    pub order: u128,
    pub unipotent_radical_order: u128,
    pub reductive_factors: Vec<String>,
    pub generators: Vec<MatrixFq>,
}

/// Per-divisor reductive factor names and their orders; the unipotent
/// radical order is the divisor's centralizer order divided by the product.
fn divisor_reductive_factors(
    spec: &GroupSpec,
    div: &crate::classes::DivisorLabel,
) -> Result<Vec<(String, u128)>> {
    let q = spec.q as u128;
    let gl_names = |parts: &[usize], qd: u128| -> Vec<(String, u128)> {
        partition_groups(parts)
            .iter()
            .map(|&(_, r)| (format!("GL({r},{qd})"), gl_order(r, qd)))
            .collect()
    };
    let u_names = |parts: &[usize], q0: u128| -> Vec<(String, u128)> {
        partition_groups(parts)
            .iter()
            .map(|&(_, r)| (format!("U({r},{q0})"), u_order(r, q0)))
            .collect()
    };
    let parts_of = |u: &UnipotentLabel| -> Result<Vec<usize>> {
        match u {
            UnipotentLabel::Partition(p) => Ok(p.clone()),
            _ => Err(Error::InvalidSpec("partition label expected".into())),
        }
    };
    Ok(match spec.family {
        Family::GL | Family::SL => {
            gl_names(&parts_of(&div.unipotent)?, q.pow(div.f.degree() as u32))
        }
        Family::U | Family::SU => match &div.phi {
            PhiClass::Phi1 => u_names(&parts_of(&div.unipotent)?, q),
            PhiClass::Phi2 { g } => {
                gl_names(&parts_of(&div.unipotent)?, q.pow(2 * g.degree() as u32))
            }
            PhiClass::Phi3 => u_names(&parts_of(&div.unipotent)?, q.pow(div.f.degree() as u32)),
            PhiClass::None => return Err(Error::InvalidSpec("missing Φ class".into())),
        },
        Family::Sp | Family::O | Family::SO | Family::Omega => {
            let alternating = spec.family == Family::Sp;
            match &div.phi {
                PhiClass::Phi2 { g } => {
                    gl_names(&parts_of(&div.unipotent)?, q.pow(g.degree() as u32))
                }
                PhiClass::Phi3 => {
                    u_names(&parts_of(&div.unipotent)?, q.pow(div.f.degree() as u32 / 2))
                }
                PhiClass::None => return Err(Error::InvalidSpec("missing Φ class".into())),
                PhiClass::Phi1 => match &div.unipotent {
                    UnipotentLabel::OddChar { v, w } => {
                        let mut out = vec![];
                        for &(_, b, mult) in v {
                            let ord = o_diag_order(&spec.field, mult, b);
                            let name = if mult % 2 == 1 {
                                format!("O({mult},{q})")
                            } else {
                                let mut gram =
                                    crate::matrix::MatrixFq::identity(&spec.field, mult);
                                gram.set(0, 0, b);
                                let form = Form::new(FormKind::Symmetric, gram)?;
                                format!("O{}({mult},{q})", form_type(&form)?.symbol())
                            };
                            out.push((name, ord));
                        }
                        for &(_, mult) in w {
                            out.push((format!("Sp({},{q})", 2 * mult), sp_order(2 * mult, q)));
                        }
                        out
                    }
                    UnipotentLabel::EvenChar { .. } => {
                        even_char_reductive_factors(q, alternating, &div.unipotent)?
                    }
                    UnipotentLabel::Partition(_) => {
                        return Err(Error::InvalidSpec(
                            "Φ₁ divisors of Sp/O carry form data".into(),
                        ))
                    }
                },
            }
        }
    })
}

/// Named reductive factors for an even-characteristic `t+1` divisor,
/// mirroring the grouping in the order formula.
fn even_char_reductive_factors(
    q: u128,
    alternating: bool,
    label: &UnipotentLabel,
) -> Result<Vec<(String, u128)>> {
    let UnipotentLabel::EvenChar { w, v, w_alpha, v_alpha, .. } = label else {
        return Err(Error::InvalidSpec("even-characteristic label expected".into()));
    };
    let mut w_all: Vec<(usize, usize, bool)> = Vec::new();
    for &(m, a) in w {
        w_all.push((m, a, false));
    }
    for &m in w_alpha {
        match w_all.iter_mut().find(|(mi, _, _)| *mi == m) {
            Some(entry) => {
                entry.1 += 1;
                entry.2 = true;
            }
            None => w_all.push((m, 1, true)),
        }
    }
    w_all.sort_unstable();
    let mut v_all: Vec<(usize, usize)> = Vec::new();
    for &(two_k, c) in v {
        v_all.push((two_k, c));
    }
    for &two_k in v_alpha {
        match v_all.iter_mut().find(|(kj, _)| *kj == two_k) {
            Some(entry) => entry.1 += 1,
            None => v_all.push((two_k, 1)),
        }
    }
    v_all.sort_unstable_by(|a, b| b.cmp(a));
    let v_sizes: Vec<usize> = v_all.iter().map(|&(two_k, _)| two_k).collect();
    let in_s = |m: usize| -> bool {
        m % 2 == 0
            || v_sizes.iter().any(|&two_k| m + 1 == two_k || m == two_k + 1)
            || (m == 1 && alternating)
    };
    let mut out = vec![];
    for &(m, a, has_alpha) in &w_all {
        if in_s(m) {
            out.push((format!("Sp({},{q})", 2 * a), sp_order(2 * a, q)));
        } else {
            let tag = if has_alpha { TypeTag::Minus } else { TypeTag::Plus };
            out.push((
                format!("O{}({},{q})", tag.symbol(), 2 * a),
                o_order(2 * a, q, tag),
            ));
        }
    }
    let s = v_all.len();
    let mut z2 = 0u32;
    for j in 0..s.saturating_sub(1) {
        if v_all[j].0 / 2 - v_all[j + 1].0 / 2 >= 2 {
            z2 += 1;
        }
    }
    let delta_zero = s == 0 || (alternating && v_all[s - 1].0 / 2 == 1);
    if !delta_zero {
        z2 += 1;
    }
    for _ in 0..z2 {
        out.push(("Z2".to_string(), 2));
    }
    Ok(out)
}

/// Ambient structure of the centralizer of a class: unipotent radical order
/// and reductive factor names (the reductive product is the remaining
/// cofactor of the ambient centralizer order).
pub fn ambient_centralizer_structure(
    spec: &GroupSpec,
    label: &ClassLabel,
) -> Result<(u128, Vec<String>)> {
    let ambient = spec.isometry_group();
    let mut radical: u128 = 1;
    let mut names = vec![];
    for div in &label.divisors {
        let single = ClassLabel {
            divisors: vec![div.clone()],
            ..label.clone()
        };
        let div_order = ambient_centralizer_order(&ambient, &single)?;
        let factors = divisor_reductive_factors(&ambient, div)?;
        let mut red: u128 = 1;
        for (name, ord) in &factors {
            red *= ord;
            names.push(name.clone());
        }
        debug_assert_eq!(div_order % red, 0);
        radical *= div_order / red;
    }
    Ok((radical, names))
}

// ---------------------------------------------------------------------------
// Explicit generating sets
// ---------------------------------------------------------------------------

use crate::classes::{class_invariant, list_classes};
use crate::conjugacy::primitive_element;
use crate::field::Fel;
use crate::groups::contains;
use crate::matrix::{elementary_divisors, gl_conjugator, ExtField, MatrixFq};
use crate::poly::Poly;

/// Generators of `C_GL(x)`. Per irreducible factor `f` of degree `d`, the
/// commutant acts `E`-linearly (`E = F_{q^d}`) on the `f`-primary part,
/// where it is the automorphism group of the module `⊕ E[s]/s^{λ_i}`; over
/// the local ring `E[s]` that group is generated by diagonal units
/// (`ω` and `1 + ω^a s^j`) and elementary transvections between chains.
/// The per-factor generators are embedded into `GL(n, q)` and conjugated
/// into `x`'s coordinates.
pub fn gl_centralizer_generators(x: &MatrixFq) -> Result<Vec<MatrixFq>> {
    let field = x.field().clone();
    let eds = elementary_divisors(x)?;
    let mut model_blocks: Vec<MatrixFq> = vec![];
    let mut local: Vec<(usize, MatrixFq)> = vec![];
    let mut offset = 0usize;
    for f in eds.factors() {
        let lambda = eds.partition_of(&f);
        let (model_f, gens_f) = factor_model_and_generators(&field, &f, &lambda)?;
        for g in gens_f {
            local.push((offset, g));
        }
        offset += model_f.n();
        model_blocks.push(model_f);
    }
    let model = MatrixFq::direct_sum(&model_blocks);
    let z = gl_conjugator(&model, x)?
        .ok_or_else(|| Error::Unsupported("model mismatch in commutant".into()))?;
    let n = x.n();
    let mut out = vec![];
    for (off, g) in local {
        let mut big = MatrixFq::identity(&field, n);
        big.set_block(off, off, &g);
        let c = big.conjugate_by(&z);
        debug_assert!(c.is_invertible());
        debug_assert_eq!(x.conjugate_by(&c), *x);
        out.push(c);
    }
    Ok(out)
}

/// The `f`-primary model `⊕ (ζ·I + N_{λ_i})` (embedded over the base field)
/// together with generators of its commutant's unit group.
fn factor_model_and_generators(
    field: &Field,
    f: &Poly,
    lambda: &[usize],
) -> Result<(MatrixFq, Vec<MatrixFq>)> {
    let d = f.degree();
    let ext = if d > 1 {
        Some(ExtField::new(field, f, false)?)
    } else {
        None
    };
    let work: Field = match &ext {
        Some(e) => e.abs.clone(),
        None => field.clone(),
    };
    let root: Fel = match &ext {
        Some(e) => e.zeta,
        None => work.neg(f.coeff(0)),
    };
    let l: usize = lambda.iter().sum();
    // Chain offsets within the E-model.
    let mut offs = vec![0usize];
    for &a in lambda {
        offs.push(offs.last().unwrap() + a);
    }
    // Model: ζ·I + N, with N the upper shift on each chain.
    let mut model = MatrixFq::scalar(&work, l, root);
    for (i, &a) in lambda.iter().enumerate() {
        for s in 0..a.saturating_sub(1) {
            model.set(offs[i] + s, offs[i] + s + 1, 1);
        }
    }
    // F_p-basis of the working field: powers of a primitive element.
    let p = work.p();
    let mut kp = 0u32;
    let mut acc = 1u64;
    while acc < work.q() {
        acc *= p;
        kp += 1;
    }
    let omega = primitive_element(&work);
    let mut basis = vec![];
    let mut w: Fel = 1;
    for _ in 0..kp {
        basis.push(w);
        w = work.mul(w, omega);
    }
    let mut gens: Vec<MatrixFq> = vec![];
    // Diagonal units per chain.
    for (i, &a) in lambda.iter().enumerate() {
        let mut scal = MatrixFq::identity(&work, l);
        for s in 0..a {
            scal.set(offs[i] + s, offs[i] + s, omega);
        }
        gens.push(scal);
        for j in 1..a {
            for &c in &basis {
                let mut g = MatrixFq::identity(&work, l);
                for s in 0..a - j {
                    g.set(offs[i] + s, offs[i] + s + j, c);
                }
                gens.push(g);
            }
        }
    }
    // Elementary transvections along a basis of the chain-hom spaces
    // (`e_t ↦ e'_{t+u}`, `max(0, b−a) ≤ u < b`).
    for (i, &a) in lambda.iter().enumerate() {
        for (k, &b) in lambda.iter().enumerate() {
            if i == k {
                continue;
            }
            for u in b.saturating_sub(a)..b {
                for &c in &basis {
                    let mut g = MatrixFq::identity(&work, l);
                    for t in 0..a {
                        if t + u < b {
                            g.set(offs[i] + t, offs[k] + t + u, c);
                        }
                    }
                    gens.push(g);
                }
            }
        }
    }
    match &ext {
        Some(e) => {
            let gens = gens.iter().map(|g| e.embed_matrix(g)).collect();
            Ok((e.embed_matrix(&model), gens))
        }
        None => Ok((model, gens)),
    }
}

/// Schreier generators of the kernel of a homomorphism to a small abelian
/// signature group, given generators of the source.
fn chi_kernel_generators(
    field: &Field,
    gens: &[MatrixFq],
    chi: &dyn Fn(&MatrixFq) -> Result<(Fel, u8)>,
) -> Result<Vec<MatrixFq>> {
    let mul_sig = |a: (Fel, u8), b: (Fel, u8)| (field.mul(a.0, b.0), a.1 ^ b.1);
    let id_sig: (Fel, u8) = (1, 0);
    let n = gens.first().map(|g| g.n()).unwrap_or(1);
    let mut transversal: std::collections::HashMap<(Fel, u8), MatrixFq> =
        std::collections::HashMap::new();
    transversal.insert(id_sig, MatrixFq::identity(field, n));
    let mut queue = vec![id_sig];
    let mut head = 0;
    let mut kernel = vec![];
    let mut seen = std::collections::HashSet::new();
    let mut gen_sigs = vec![];
    for g in gens {
        gen_sigs.push(chi(g)?);
    }
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let t = transversal[&v].clone();
        for (g, sg) in gens.iter().zip(&gen_sigs) {
            let v2 = mul_sig(v, *sg);
            match transversal.get(&v2) {
                None => {
                    transversal.insert(v2, t.mul(g));
                    queue.push(v2);
                }
                Some(t2) => {
                    let k = t.mul(g).mul(&t2.inverse()?);
                    if !k.is_identity() && seen.insert(k.entries().to_vec()) {
                        kernel.push(k);
                    }
                }
            }
        }
    }
    Ok(kernel)
}

/// Full centralizer description of `x` in the group: exact order, radical
/// order, symbolic reductive factors, and a generating set.
pub fn centralizer(spec: &GroupSpec, x: &MatrixFq) -> Result<CentralizerDescription> {
    if !contains(spec, x) {
        return Err(Error::NotInGroup);
    }
    let label = class_invariant(spec, x)?;
    let class = list_classes(spec)?
        .into_iter()
        .find(|c| c.label == label)
        .ok_or_else(|| Error::Unsupported("class of element not listed".into()))?;
    let (radical, factors) = ambient_centralizer_structure(spec, &label)?;
    let generators = centralizer_generators(spec, x)?;
    Ok(CentralizerDescription {
        order: class.centralizer_order,
        unipotent_radical_order: radical,
        reductive_factors: factors,
        generators,
    })
}

/// Centralizer description for a unipotent element.
pub fn unipotent_centralizer(spec: &GroupSpec, x: &MatrixFq) -> Result<CentralizerDescription> {
    if !x.is_unipotent() {
        return Err(Error::NotUnipotent);
    }
    centralizer(spec, x)
}

/// Centralizer of `x` in `GL(n, q)`.
pub fn gl_centralizer(x: &MatrixFq) -> Result<CentralizerDescription> {
    let spec = GroupSpec::from_name("GL", x.n(), x.field().q())?;
    centralizer(&spec, x)
}

/// Centralizer of a unipotent `x` in `GL(n, q)`.
pub fn gl_unipotent_centralizer(x: &MatrixFq) -> Result<CentralizerDescription> {
    if !x.is_unipotent() {
        return Err(Error::NotUnipotent);
    }
    gl_centralizer(x)
}

/// Centralizer of `x` in `SL(n, q)`.
pub fn sl_centralizer(x: &MatrixFq) -> Result<CentralizerDescription> {
    let spec = GroupSpec::from_name("SL", x.n(), x.field().q())?;
    centralizer(&spec, x)
}

/// Generating set for `C_G(x)`: the GL commutant construction for linear
/// families, Schreier generators from the block reduction for isometry
/// families, and a kernel-of-signature refinement for the subgroups.
pub fn centralizer_generators(spec: &GroupSpec, x: &MatrixFq) -> Result<Vec<MatrixFq>> {
    match spec.family {
        Family::GL => gl_centralizer_generators(x),
        Family::SL => {
            let gens = gl_centralizer_generators(x)?;
            chi_kernel_generators(&spec.field, &gens, &|g| Ok((g.det(), 0)))
        }
        Family::U | Family::Sp | Family::O => {
            let eds = elementary_divisors(x)?;
            let r = crate::conjugacy::reduce(spec, x, &eds)?
                .ok_or_else(|| Error::Unsupported("element matches no listed class".into()))?;
            Ok(r.centralizer_gens)
        }
        Family::SU | Family::SO | Family::Omega => {
            let ambient = spec.isometry_group();
            let eds = elementary_divisors(x)?;
            let r = crate::conjugacy::reduce(&ambient, x, &eds)?
                .ok_or_else(|| Error::Unsupported("element matches no listed class".into()))?;
            let form = ambient.form.clone();
            let family = spec.family;
            chi_kernel_generators(&spec.field, &r.centralizer_gens, &move |g| {
                let theta = if family == Family::Omega {
                    crate::forms::spinor_norm(g, form.as_ref().unwrap())?
                } else {
                    0
                };
                Ok((g.det(), theta))
            })
        }
    }
}

// ---------------------------------------------------------------------------
