//! Conjugacy class representatives and labels.
//!
//! A class in a classical group is labelled by its generalized elementary
//! divisors `f^{m}` together with per-divisor unipotent data: a plain Jordan
//! partition for linear/unitary divisors and for the Φ₂/Φ₃ divisors of the
//! symplectic/orthogonal families, and decorated block data (`V_b(k)`,
//! `W(k)`, and their `α`-variants) for the `t ∓ 1` divisors of symplectic
//! and orthogonal groups. Representatives are assembled blockwise, each
//! block carrying the form it preserves, and the direct sum is conjugated
//! into the group's standard form.

use std::fmt;

use crate::centralizers::class_size_and_centralizer;
use crate::error::{Error, Result};
use crate::field::{Fel, Field};
use crate::forms::{
    congruence_transform, is_isometry, Form, FormKind, TypeTag,
};
use crate::groups::{
    contains, invariant_quadratic_form, phi3_block, Family, GroupSpec,
};
use crate::matrix::{
    elementary_divisors, left_kernel, ElementaryDivisorList, ExtField, MatrixFq,
};
use crate::poly::{monic_irreducibles, phi_classify, PhiClass, Poly};

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

/// Unipotent datum attached to one generalized elementary divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnipotentLabel {
    /// Jordan partition (parts descending): GL/SL, unitary groups, and the
    /// Φ₂/Φ₃ divisors of the symplectic/orthogonal families.
    Partition(Vec<usize>),
    /// Odd characteristic `t ∓ 1` divisor of Sp/O:
    /// `⊕_i (V_{b_i}(k_i) ⊕ V_1(k_i)^{a_i−1}) ⊕ ⊕_j W(l_j)^{c_j}`,
    /// `v` holding `(k_i, b_i, a_i)` and `w` holding `(l_j, c_j)`.
    OddChar {
        v: Vec<(usize, Fel, usize)>,
        w: Vec<(usize, usize)>,
    },
    /// Even characteristic `t + 1` divisor of Sp/O:
    /// `⊕ W(m_i)^{a_i} ⊕ ⊕ V(2k_j)^{c_j} ⊕ ⊕ W_α(m'_r) ⊕ ⊕ V_α(2k'_s)`;
    /// `w_prime` marks the second Ω-class of a split class (one `W` block
    /// replaced by its reflected twin `W'`).
    EvenChar {
        w: Vec<(usize, usize)>,
        v: Vec<(usize, usize)>,
        w_alpha: Vec<usize>,
        v_alpha: Vec<usize>,
        w_prime: bool,
    },
}

impl UnipotentLabel {
    /// All Jordan block sizes with multiplicity.
    pub fn parts(&self) -> Vec<usize> {
        match self {
            UnipotentLabel::Partition(p) => p.clone(),
            UnipotentLabel::OddChar { v, w } => {
                let mut out = vec![];
                for &(k, _, a) in v {
                    out.extend(std::iter::repeat(k).take(a));
                }
                for &(l, c) in w {
                    out.extend(std::iter::repeat(l).take(2 * c));
                }
                out.sort_unstable_by(|a, b| b.cmp(a));
                out
            }
            UnipotentLabel::EvenChar { w, v, w_alpha, v_alpha, .. } => {
                let mut out = vec![];
                for &(m, a) in w {
                    out.extend(std::iter::repeat(m).take(2 * a));
                }
                for &(k, c) in v {
                    out.extend(std::iter::repeat(k).take(c));
                }
                for &m in w_alpha {
                    out.extend(std::iter::repeat(m).take(2));
                }
                out.extend(v_alpha.iter().copied());
                out.sort_unstable_by(|a, b| b.cmp(a));
                out
            }
        }
    }
}

impl fmt::Display for UnipotentLabel {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnipotentLabel::Partition(p) => {
                let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                write!(fm, "[{}]", s.join(","))
            }
            UnipotentLabel::OddChar { v, w } => {
                let mut items = vec![];
                for &(k, b, a) in v {
                    let tag = if b == 1 { String::new() } else { format!("_{}", b) };
                    if a > 1 {
                        items.push(format!("V{}({})+V({})^{}", tag, k, k, a - 1));
                    } else {
                        items.push(format!("V{}({})", tag, k));
                    }
                }
                for &(l, c) in w {
                    if c > 1 {
                        items.push(format!("W({})^{}", l, c));
                    } else {
                        items.push(format!("W({})", l));
                    }
                }
                write!(fm, "{}", items.join("+"))
            }
            UnipotentLabel::EvenChar { w, v, w_alpha, v_alpha, w_prime } => {
                let mut items = vec![];
                let mut first_w = true;
                for &(m, a) in w {
                    let name = if *w_prime && first_w { "W'" } else { "W" };
                    first_w = false;
                    if a > 1 {
                        items.push(format!("{}({})^{}", name, m, a));
                    } else {
                        items.push(format!("{}({})", name, m));
                    }
                }
                for &(k, c) in v {
                    if c > 1 {
                        items.push(format!("V({})^{}", k, c));
                    } else {
                        items.push(format!("V({})", k));
                    }
                }
                for &m in w_alpha {
                    items.push(format!("Wa({})", m));
                }
                for &k in v_alpha {
                    items.push(format!("Va({})", k));
                }
                if items.is_empty() {
                    items.push("1".into());
                }
                write!(fm, "{}", items.join("+"))
            }
        }
    }
}

/// Human-readable polynomial in `t`.
pub fn poly_repr(p: &Poly) -> String {
    let mut terms = vec![];
    for (i, &c) in p.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match i {
            0 => format!("{}", c),
            1 if c == 1 => "t".into(),
            1 => format!("{}t", c),
            _ if c == 1 => format!("t^{}", i),
            _ => format!("{}t^{}", c, i),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// One generalized elementary divisor with its unipotent datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorLabel {
    /// The irreducible (Φ₁/Φ₃) or `g·g*` (Φ₂) polynomial.
    pub f: Poly,
    pub phi: PhiClass,
    pub unipotent: UnipotentLabel,
}

impl fmt::Display for DivisorLabel {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}: {}", poly_repr(&self.f), self.unipotent)
    }
}

/// Full class label: divisor data plus the coset index when the ambient
/// class splits in SL/SU/SO/Ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLabel {
    pub divisors: Vec<DivisorLabel>,
    pub coset: usize,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.divisors.iter().map(|d| d.to_string()).collect();
        write!(fm, "({})", items.join("; "))?;
        if self.coset > 0 {
            write!(fm, "#{}", self.coset)?;
        }
        Ok(())
    }
}

/// A conjugacy class: label, in-group representative, class size and
/// centralizer order.
#[derive(Clone, Debug)]
pub struct ClassRep {
    pub label: ClassLabel,
    pub rep: MatrixFq,
    pub size: u128,
    pub centralizer_order: u128,
}

// ---------------------------------------------------------------------------
// Small combinatorial helpers
// ---------------------------------------------------------------------------

/// All partitions of `n` with parts descending, deterministic order.
pub fn partitions_of(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            cur.push(part);
            rec(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(n, n, &mut vec![], &mut out);
    out
}

/// Group a descending partition into `(size, multiplicity)` pairs, sizes
/// descending.
fn group_partition(p: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = vec![];
    for &part in p {
        match out.last_mut() {
            Some((s, m)) if *s == part => *m += 1,
            _ => out.push((part, 1)),
        }
    }
    out
}

/// Upper-triangular unipotent Jordan block `J_m` (ones on the diagonal and
/// superdiagonal) over `field`.
pub fn jordan_block(field: &Field, m: usize) -> MatrixFq {
    MatrixFq::from_fn(field, m, |i, j| {
        if i == j || j == i + 1 {
            1
        } else {
            0
        }
    })
}

/// Quadratic-form matrix (strict upper triangle plus halved diagonal) of a
/// symmetric Gram matrix, q odd.
fn quadratic_from_symmetric(b: &MatrixFq) -> MatrixFq {
    let field = b.field().clone();
    let half = field.inv(field.add(1, 1)).expect("odd characteristic");
    let n = b.n();
    MatrixFq::from_fn(&field, n, |i, j| {
        if i == j {
            field.mul(half, b.get(i, i))
        } else if j > i {
            b.get(i, j)
        } else {
            0
        }
    })
}

// ---------------------------------------------------------------------------
// Block builders
// ---------------------------------------------------------------------------

/// Conjugate `x` into an isometry of `target`: enumerate the `x`-invariant
/// forms of the target's kind in a fixed deterministic order, take the first
/// one congruent to `target`, and pull `x` through the congruence. Fails
/// with `NotCongruent` when no invariant form lies in the target's
/// congruence class.
pub fn conjugate_into_form(x: &MatrixFq, target: &Form) -> Result<MatrixFq> {
    let field = target.field().clone();
    let n = x.n();
    assert_eq!(n, target.n());
    let q = field.q();
    if target.kind() == FormKind::Quadratic {
        // Unknowns: upper-triangular entries of A; constraint: X·A·Xᵗ − A
        // has symmetric residual zero (i.e. is alternating).
        let idx: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut rows = vec![];
        for &(i, j) in &idx {
            let mut a = MatrixFq::zero(&field, n);
            a.set(i, j, 1);
            let s = x.mul(&a).mul(&x.transpose()).sub(&a);
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
            let Ok(form) = Form::new(FormKind::Quadratic, a) else {
                continue;
            };
            if let Ok(t) = congruence_transform(target, &form) {
                let y = x.conjugate_by(&t);
                debug_assert!(is_isometry(&y, target));
                return Ok(y);
            }
        }
        return Err(Error::NotCongruent);
    }
    // Sesquilinear kinds: unknowns are all n² entries of M; constraint
    // X·M·X* = M (linear in M — the bar acts on X only).
    let idx: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let xs = x.star();
    let mut rows = vec![];
    for &(i, j) in &idx {
        let mut m = MatrixFq::zero(&field, n);
        m.set(i, j, 1);
        let s = x.mul(&m).mul(&xs).sub(&m);
        rows.push(s.entries().to_vec());
    }
    let kernel = left_kernel(&field, &rows);
    let total = q.pow(kernel.len() as u32);
    for combo in 1..total {
        let mut m = MatrixFq::zero(&field, n);
        let mut rem = combo;
        for basis_vec in &kernel {
            let c = field.elements().nth((rem % q) as usize).unwrap();
            rem /= q;
            if c == 0 {
                continue;
            }
            for (&(i, j), &v) in idx.iter().zip(basis_vec) {
                let cur = m.get(i, j);
                m.set(i, j, field.add(cur, field.mul(c, v)));
            }
        }
        let Ok(form) = Form::new(target.kind(), m) else {
            continue;
        };
        if let Ok(t) = congruence_transform(target, &form) {
            let y = x.conjugate_by(&t);
            debug_assert!(is_isometry(&y, target));
            return Ok(y);
        }
    }
    Err(Error::NotCongruent)
}

/// A `W(k)` block: two Jordan blocks `J_k` placed on totally isotropic
/// (`Q`-zero) complementary subspaces of the standard form of dimension
/// `2k`: `X = diag(J, (P⁻¹J⁻¹P)*)` where `P` is the pairing block.
pub fn w_pair(field: &Field, k: usize, kind: FormKind) -> Result<(MatrixFq, Form)> {
    let form = match kind {
        FormKind::Alternating => Form::std_alternating(field, 2 * k)?,
        FormKind::Hermitian => Form::std_hermitian(field, 2 * k)?,
        FormKind::Quadratic => Form::std_quadratic(field, 2 * k, TypeTag::Plus, true)?,
        FormKind::Symmetric => Form::std_symmetric(field, 2 * k, TypeTag::Plus, true)?,
    };
    let p = form.gram().block(0, k, k);
    let j = jordan_block(field, k);
    let d = p.inverse()?.mul(&j.inverse()?).mul(&p).star();
    let mut x = MatrixFq::zero(field, 2 * k);
    x.set_block(0, 0, &j);
    x.set_block(k, k, &d);
    debug_assert!(is_isometry(&x, &form));
    debug_assert!(x.is_unipotent());
    Ok((x, form))
}

// ---------------------------------------------------------------------------
// Per-divisor unipotent options
// ---------------------------------------------------------------------------

/// A fully-built block for one divisor: the matrix and the form it
/// preserves.
type Block = (MatrixFq, Form);

/// Unipotent options for a `t − λ` divisor of multiplicity `m` in a group
/// of the given form kind: every class label together with its block.
fn phi1_options(
    field: &Field,
    kind: FormKind,
    lambda: Fel,
    m: usize,
) -> Result<Vec<(UnipotentLabel, Block)>> {
    let mut out = vec![];
    match kind {
        FormKind::Hermitian => {
            for parts in partitions_of(m) {
                let mut blocks = vec![];
                let mut grams = vec![];
                for &e in &parts {
                    let target = Form::std_hermitian(field, e)?;
                    blocks.push(conjugate_into_form(&jordan_block(field, e), &target)?);
                    grams.push(target.gram().clone());
                }
                let x = MatrixFq::direct_sum(&blocks).scale(lambda);
                let form = Form::new(kind, MatrixFq::direct_sum(&grams))?;
                debug_assert!(is_isometry(&x, &form));
                out.push((UnipotentLabel::Partition(parts), (x, form)));
            }
        }
        FormKind::Alternating | FormKind::Quadratic if field.p() != 2 => {
            out = phi1_options_odd_char(field, kind, lambda, m)?;
        }
        FormKind::Alternating | FormKind::Quadratic => {
            out = phi1_options_even_char(field, kind, m)?;
        }
        FormKind::Symmetric => {
            return Err(Error::Unsupported(
                "odd-characteristic orthogonal groups use quadratic forms".into(),
            ));
        }
    }
    Ok(out)
}

/// Odd characteristic `t − λ` options for Sp (alternating) and O
/// (quadratic): `V_b`-decorated partitions.
fn phi1_options_odd_char(
    field: &Field,
    kind: FormKind,
    lambda: Fel,
    m: usize,
) -> Result<Vec<(UnipotentLabel, Block)>> {
    let alternating = kind == FormKind::Alternating;
    let alpha = field.least_nonsquare();
    let mut out = vec![];
    for parts in partitions_of(m) {
        let groups = group_partition(&parts);
        // V sizes: even for Sp, odd for O; the other parity must pair up.
        let mut valid = true;
        let mut v_base: Vec<(usize, usize)> = vec![];
        let mut w: Vec<(usize, usize)> = vec![];
        for &(size, mult) in &groups {
            let is_v = if alternating { size % 2 == 0 } else { size % 2 == 1 };
            if is_v {
                v_base.push((size, mult));
            } else {
                if mult % 2 != 0 {
                    valid = false;
                    break;
                }
                w.push((size, mult / 2));
            }
        }
        if !valid {
            continue;
        }
        // All b-vectors over the V entries.
        let r = v_base.len();
        for mask in 0..(1u32 << r) {
            let v: Vec<(usize, Fel, usize)> = v_base
                .iter()
                .enumerate()
                .map(|(i, &(size, mult))| {
                    let b = if mask >> i & 1 == 1 { alpha } else { 1 };
                    (size, b, mult)
                })
                .collect();
            let mut blocks: Vec<MatrixFq> = vec![];
            let mut grams: Vec<MatrixFq> = vec![];
            let mut push = |blk: Block| {
                grams.push(blk.1.gram().clone());
                blocks.push(blk.0);
            };
            let mut ok = true;
            for &(size, b, mult) in &v {
                for copy in 0..mult {
                    let bb = if copy == 0 { b } else { 1 };
                    match v_block_odd_char(field, kind, size, bb) {
                        Ok(blk) => push(blk),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    break;
                }
            }
            if !ok {
                continue;
            }
            for &(size, mult) in &w {
                for _ in 0..mult {
                    push(w_pair(field, size, kind)?);
                }
            }
            let x = MatrixFq::direct_sum(&blocks).scale(lambda);
            let form = Form::new(kind, MatrixFq::direct_sum(&grams))?;
            debug_assert!(is_isometry(&x, &form));
            out.push((UnipotentLabel::OddChar { v: v.clone(), w: w.clone() }, (x, form)));
        }
    }
    Ok(out)
}

/// Odd characteristic single `V_b(k)` block: for Sp a regular `J_k` (k even)
/// preserving the standard alternating form, twisted by `diag(b·I, I)` for
/// `b = α`; for O a regular `J_k` (k odd) conjugated into the quadratic form
/// with symmetric Gram `antidiag(I, 2b, I)`.
fn v_block_odd_char(field: &Field, kind: FormKind, k: usize, b: Fel) -> Result<Block> {
    if kind == FormKind::Alternating {
        let form = Form::std_alternating(field, k)?;
        let x1 = conjugate_into_form(&jordan_block(field, k), &form)?;
        if b == 1 {
            return Ok((x1, form));
        }
        // z_b: e_i ↦ b·e_i scales the form by b, so conjugation by it stays
        // inside Sp while moving between the two regular classes.
        let half = k / 2;
        let z = MatrixFq::from_fn(field, k, |i, j| {
            if i != j {
                0
            } else if i < half {
                b
            } else {
                1
            }
        });
        let x = x1.conjugate_by(&z);
        debug_assert!(is_isometry(&x, &form));
        return Ok((x, form));
    }
    // Orthogonal: k = 2l + 1, target symmetric Gram antidiag(I_l, 2b, I_l).
    let l = k / 2;
    let mut g = MatrixFq::zero(field, k);
    for i in 0..l {
        g.set(i, k - 1 - i, 1);
        g.set(k - 1 - i, i, 1);
    }
    g.set(l, l, field.mul(field.add(1, 1), b));
    let target = Form::new(FormKind::Quadratic, quadratic_from_symmetric(&g))?;
    let x = conjugate_into_form(&jordan_block(field, k), &target)?;
    Ok((x, target))
}

/// Even characteristic `t + 1` options for Sp and O: the admissible
/// `W/V/W_α/V_α` configurations of total dimension `m`.
fn phi1_options_even_char(
    field: &Field,
    kind: FormKind,
    m: usize,
) -> Result<Vec<(UnipotentLabel, Block)>> {
    let alternating = kind == FormKind::Alternating;
    let mut configs = vec![];
    enumerate_even_char_configs(m, alternating, &mut configs);
    let mut out = vec![];
    for (w, v, w_alpha, v_alpha) in configs {
        let mut blocks: Vec<MatrixFq> = vec![];
        let mut grams: Vec<MatrixFq> = vec![];
        let mut push = |blk: Block| {
            grams.push(blk.1.gram().clone());
            blocks.push(blk.0);
        };
        for &(mi, a) in &w {
            for _ in 0..a {
                push(w_pair(field, mi, kind)?);
            }
        }
        for &(k, c) in &v {
            for _ in 0..c {
                push(v_block_even_char(field, kind, k, false)?);
            }
        }
        for &mi in &w_alpha {
            push(w_alpha_block(field, kind, mi)?);
        }
        for &k in &v_alpha {
            push(v_block_even_char(field, kind, k, true)?);
        }
        let x = MatrixFq::direct_sum(&blocks);
        let form = Form::new(kind, MatrixFq::direct_sum(&grams))?;
        debug_assert!(is_isometry(&x, &form));
        let label = UnipotentLabel::EvenChar { w, v, w_alpha, v_alpha, w_prime: false };
        out.push((label, (x, form)));
    }
    Ok(out)
}

/// Enumerate the admissible even-characteristic configurations
/// `(W, V, W_α, V_α)` of total dimension `m`; the constraints on sizes,
/// multiplicities, and forbidden adjacencies are checked here.
fn enumerate_even_char_configs(
    m: usize,
    alternating: bool,
    out: &mut Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>, Vec<usize>, Vec<usize>)>,
) {
    // Choose, in order: W_α (distinct odd sizes), V_α (distinct even sizes),
    // V (distinct even sizes with multiplicity 1 or 2), W (any distinct
    // sizes with multiplicity ≥ 1). Sizes descend within each family.
    let min_w_alpha = if alternating { 3 } else { 1 };
    let min_v_alpha = if alternating { 4 } else { 2 };
    fn subsets(sizes: &[usize], budget: usize, cur: &mut Vec<usize>, acc: &mut Vec<Vec<usize>>) {
        acc.push(cur.clone());
        for (i, &s) in sizes.iter().enumerate() {
            if 2 * s <= budget {
                cur.push(s);
                subsets(&sizes[i + 1..], budget - 2 * s, cur, acc);
                cur.pop();
            }
        }
    }
    let wa_sizes: Vec<usize> = (min_w_alpha..=m / 2).filter(|s| s % 2 == 1).rev().collect();
    let mut wa_sets = vec![];
    subsets(&wa_sizes, m, &mut vec![], &mut wa_sets);
    for wa in wa_sets {
        let used_wa: usize = wa.iter().map(|s| 2 * s).sum();
        let va_sizes: Vec<usize> = (min_v_alpha..=m - used_wa)
            .filter(|s| s % 2 == 0)
            .rev()
            .collect();
        // V_α: distinct even sizes, their half-values not adjacent.
        let mut va_sets = vec![];
        fn va_rec(
            sizes: &[usize],
            budget: usize,
            cur: &mut Vec<usize>,
            acc: &mut Vec<Vec<usize>>,
        ) {
            acc.push(cur.clone());
            for (i, &s) in sizes.iter().enumerate() {
                if s <= budget && !cur.iter().any(|&t| (t / 2).abs_diff(s / 2) == 1) {
                    cur.push(s);
                    va_rec(&sizes[i + 1..], budget - s, cur, acc);
                    cur.pop();
                }
            }
        }
        va_rec(&va_sizes, m - used_wa, &mut vec![], &mut va_sets);
        for va in va_sets {
            // W_α sizes must avoid 2k ± 1 for every V_α size 2k.
            if wa
                .iter()
                .any(|&mp| va.iter().any(|&s| mp + 1 == s || mp == s + 1))
            {
                continue;
            }
            let used_va: usize = va.iter().sum();
            let rest = m - used_wa - used_va;
            // V: even sizes with multiplicity 1..2.
            let v_sizes: Vec<usize> = (2..=rest).filter(|s| s % 2 == 0).rev().collect();
            let mut v_sets: Vec<Vec<(usize, usize)>> = vec![];
            fn v_rec(
                sizes: &[usize],
                budget: usize,
                va: &[usize],
                wa: &[usize],
                cur: &mut Vec<(usize, usize)>,
                acc: &mut Vec<Vec<(usize, usize)>>,
            ) {
                acc.push(cur.clone());
                for (i, &s) in sizes.iter().enumerate() {
                    if s > budget {
                        continue;
                    }
                    // no V_α half-value may exceed this half-value by one
                    if va.iter().any(|&t| t / 2 == s / 2 + 1) {
                        continue;
                    }
                    // W_α sizes must avoid 2k ± 1
                    if wa.iter().any(|&mp| mp + 1 == s || mp == s + 1) {
                        continue;
                    }
                    let max_mult = if va.contains(&s) { 1 } else { 2 };
                    for mult in 1..=max_mult.min(budget / s) {
                        cur.push((s, mult));
                        v_rec(&sizes[i + 1..], budget - s * mult, va, wa, cur, acc);
                        cur.pop();
                    }
                }
            }
            v_rec(&v_sizes, rest, &va, &wa, &mut vec![], &mut v_sets);
            for v in v_sets {
                let used_v: usize = v.iter().map(|&(s, c)| s * c).sum();
                let rest_w = rest - used_v;
                // W: distinct sizes, arbitrary multiplicity, dimension 2·a·m_i.
                let w_sizes: Vec<usize> = (1..=rest_w / 2).rev().collect();
                let mut w_sets: Vec<Vec<(usize, usize)>> = vec![];
                fn w_rec(
                    sizes: &[usize],
                    budget: usize,
                    cur: &mut Vec<(usize, usize)>,
                    acc: &mut Vec<Vec<(usize, usize)>>,
                ) {
                    if budget == 0 {
                        acc.push(cur.clone());
                        return;
                    }
                    for (i, &s) in sizes.iter().enumerate() {
                        for mult in 1..=budget / (2 * s) {
                            cur.push((s, mult));
                            w_rec(&sizes[i + 1..], budget - 2 * s * mult, cur, acc);
                            cur.pop();
                        }
                    }
                }
                w_rec(&w_sizes, rest_w, &mut vec![], &mut w_sets);
                for w in w_sets {
                    out.push((w.clone(), v.clone(), wa.clone(), va.clone()));
                }
            }
        }
    }
}

/// Even characteristic `V(2k)` / `V_α(2k)` block: a regular `J_{2k}`
/// conjugated to preserve the plus (resp. minus) standard quadratic form;
/// for Sp the block is paired with the polar alternating form.
fn v_block_even_char(field: &Field, kind: FormKind, size: usize, alpha: bool) -> Result<Block> {
    let tag = if alpha { TypeTag::Minus } else { TypeTag::Plus };
    let target = Form::std_quadratic(field, size, tag, true)?;
    let x = conjugate_into_form(&jordan_block(field, size), &target)?;
    if kind == FormKind::Alternating {
        let form = Form::new(FormKind::Alternating, target.polar())?;
        debug_assert!(is_isometry(&x, &form));
        Ok((x, form))
    } else {
        Ok((x, target))
    }
}

/// Even characteristic `W_α(m)` block: the `W(m)` pair matrix conjugated to
/// preserve the minus-type standard quadratic form of dimension `2m`; for Sp
/// paired with the polar alternating form.
fn w_alpha_block(field: &Field, kind: FormKind, m: usize) -> Result<Block> {
    let (wx, _) = w_pair(field, m, FormKind::Quadratic)?;
    let target = Form::std_quadratic(field, 2 * m, TypeTag::Minus, true)?;
    let x = conjugate_into_form(&wx, &target)?;
    if kind == FormKind::Alternating {
        let form = Form::new(FormKind::Alternating, target.polar())?;
        debug_assert!(is_isometry(&x, &form));
        Ok((x, form))
    } else {
        Ok((x, target))
    }
}

// ---------------------------------------------------------------------------
// Φ₂ / Φ₃ divisor blocks
// ---------------------------------------------------------------------------

/// Φ₂ divisor block for `f = g·g*` with Jordan partition `parts`:
/// `X = diag(Y, Y^{*-1})` with `Y = ⊕ companion(g^e)`, on the hyperbolic
/// form `[[0, I], [ε·I, 0]]`.
fn phi2_divisor_block(g: &Poly, parts: &[usize], kind: FormKind) -> Result<Block> {
    let field = g.field().clone();
    let y = MatrixFq::direct_sum(
        &parts.iter().map(|&e| MatrixFq::companion(&g.pow(e))).collect::<Vec<_>>(),
    );
    let d = y.n();
    let ysi = y.star().inverse()?;
    let mut x = MatrixFq::zero(&field, 2 * d);
    x.set_block(0, 0, &y);
    x.set_block(d, d, &ysi);
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

/// Φ₃ divisor block for a self-dual irreducible `f` with Jordan partition
/// `parts` (of the multiplicity `m`): a unitary unipotent over the
/// extension `E = F[t]/(f)` twisted by the root of `f`, written over `F`
/// with the single Φ₃ block in place of the companion matrix; the preserved
/// form arranges `m` copies of the Φ₃ block form along the antidiagonal.
fn phi3_divisor_block(f: &Poly, parts: &[usize], kind: FormKind) -> Result<Block> {
    let field = f.field().clone();
    let m: usize = parts.iter().sum();
    let build_kind = if kind == FormKind::Quadratic && field.p() != 2 {
        // q odd: construct the bilinear data symmetrically, convert at the end.
        FormKind::Symmetric
    } else {
        kind
    };
    let (z, bf) = phi3_block(f, build_kind)?;
    if m == 1 {
        if build_kind == FormKind::Symmetric && kind == FormKind::Quadratic {
            let a = quadratic_from_symmetric(bf.gram());
            let form = Form::new(FormKind::Quadratic, a)?;
            debug_assert!(is_isometry(&z, &form));
            return Ok((z, form));
        }
        return Ok((z, bf));
    }
    let d = f.degree();
    let ext = ExtField::new(&field, f, true)?;
    let abs = ext.abs.clone();
    // Unitary unipotent over E preserving the antidiagonal-ones hermitian
    // form of dimension m.
    let mut blocks = vec![];
    let mut grams = vec![];
    for &e in parts {
        let target = Form::std_hermitian(&abs, e)?;
        blocks.push(conjugate_into_form(&jordan_block(&abs, e), &target)?);
        grams.push(target.gram().clone());
    }
    let u = MatrixFq::direct_sum(&blocks);
    let h_total = Form::new(FormKind::Hermitian, MatrixFq::direct_sum(&grams))?;
    let h_std = Form::std_hermitian(&abs, m)?;
    let t = congruence_transform(&h_std, &h_total)?;
    let x_ext = u.conjugate_by(&t).scale(ext.zeta);
    // Write over F with Z in place of the companion matrix.
    let mut zpows = vec![MatrixFq::identity(&field, d)];
    for _ in 1..d {
        zpows.push(zpows.last().unwrap().mul(&z));
    }
    let mut x = MatrixFq::zero(&field, m * d);
    for i in 0..m {
        for j in 0..m {
            let coords = ext.coords(x_ext.get(i, j)).to_vec();
            let mut blk = MatrixFq::zero(&field, d);
            for (e, &cf) in coords.iter().enumerate() {
                blk = blk.add(&zpows[e].scale(cf));
            }
            x.set_block(i * d, j * d, &blk);
        }
    }
    let form = match kind {
        FormKind::Alternating | FormKind::Hermitian | FormKind::Symmetric => {
            let mut b = MatrixFq::zero(&field, m * d);
            for r in 0..m {
                b.set_block(r * d, (m - 1 - r) * d, bf.gram());
            }
            Form::new(kind, b)?
        }
        FormKind::Quadratic => {
            if field.p() != 2 {
                let mut b = MatrixFq::zero(&field, m * d);
                for r in 0..m {
                    b.set_block(r * d, (m - 1 - r) * d, bf.gram());
                }
                Form::new(FormKind::Quadratic, quadratic_from_symmetric(&b))?
            } else {
                invariant_quadratic_form(&x)?
            }
        }
    };
    if !is_isometry(&x, &form) {
        return Err(Error::InvalidSpec(
            "Φ₃ multiplicity block failed the isometry check".into(),
        ));
    }
    Ok((x, form))
}

// ---------------------------------------------------------------------------
// Divisor pools and assignments
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct DivisorCandidate {
    f: Poly,
    phi: PhiClass,
}

impl DivisorCandidate {
    fn degree(&self) -> usize {
        self.f.degree()
    }
}

/// Candidate generalized elementary divisor bases for the isometry
/// families, sorted by (degree, graded-lex).
fn isometry_divisor_pool(spec: &GroupSpec) -> Result<Vec<DivisorCandidate>> {
    let field = &spec.field;
    let n = spec.n;
    let unitary = spec.family.is_unitary();
    let mut pool = vec![];
    // Φ₁: t − λ with λ·λ̄ = 1.
    let lambdas: Vec<Fel> = if unitary {
        field
            .elements()
            .filter(|&l| l != 0 && field.mul(l, field.bar(l)) == 1)
            .collect()
    } else if field.p() == 2 {
        vec![1]
    } else {
        vec![1, field.neg(1)]
    };
    for l in lambdas {
        pool.push(DivisorCandidate {
            f: Poly::t_minus(field, l),
            phi: PhiClass::Phi1,
        });
    }
    // Φ₂ and Φ₃.
    for deg in 1..=n {
        for g in monic_irreducibles(field, deg) {
            if g.coeff(0) == 0 {
                continue;
            }
            let gd = g.dual()?;
            if gd == g {
                if deg >= 2 && 2 * 1 <= n {
                    // self-dual irreducible: Φ₃ when the degree parity fits
                    let ok = if unitary { deg % 2 == 1 } else { deg % 2 == 0 };
                    if ok {
                        pool.push(DivisorCandidate { f: g, phi: PhiClass::Phi3 });
                    }
                }
            } else if g.grlex_cmp(&gd) == std::cmp::Ordering::Less && 2 * deg <= n {
                pool.push(DivisorCandidate {
                    f: g.mul(&gd),
                    phi: PhiClass::Phi2 { g },
                });
            }
        }
    }
    pool.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.f.grlex_cmp(&b.f))
    });
    Ok(pool)
}

/// All assignments of multiplicities to pool divisors with
/// `Σ m_i · deg(f_i) = n`.
fn multiplicity_assignments(
    pool: &[DivisorCandidate],
    n: usize,
) -> Vec<Vec<(DivisorCandidate, usize)>> {
    let mut out = vec![];
    fn rec(
        pool: &[DivisorCandidate],
        remaining: usize,
        cur: &mut Vec<(DivisorCandidate, usize)>,
        out: &mut Vec<Vec<(DivisorCandidate, usize)>>,
    ) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        if pool.is_empty() {
            return;
        }
        let d = pool[0].degree();
        for m in (0..=remaining / d).rev() {
            if m > 0 {
                cur.push((pool[0].clone(), m));
            }
            rec(&pool[1..], remaining - m * d, cur, out);
            if m > 0 {
                cur.pop();
            }
        }
    }
    rec(pool, n, &mut vec![], &mut out);
    out
}

// ---------------------------------------------------------------------------
// Coset elements for the special / Ω subgroups
// ---------------------------------------------------------------------------

/// Element of GL with determinant a generator of the needed quotient:
/// `diag(ω, 1, …, 1)`.
fn z_linear(spec: &GroupSpec) -> MatrixFq {
    let field = &spec.field;
    let omega = field.primitive();
    let mut z = MatrixFq::identity(field, spec.n);
    z.set(0, 0, omega);
    z
}

/// Element of U whose determinant generates det(U): `diag(ω, 1, …, ω^{-q})`.
fn z_unitary(spec: &GroupSpec) -> MatrixFq {
    let field = &spec.field;
    let omega = field.primitive();
    let n = spec.n;
    let mut z = MatrixFq::identity(field, n);
    z.set(0, 0, omega);
    z.set(n - 1, n - 1, field.inv(field.bar(omega)).unwrap());
    debug_assert!(is_isometry(&z, spec.form.as_ref().unwrap()));
    z
}

/// Orthogonal reflection `r_v(u) = u − (β(u,v)/Q(v))·v` in a vector of
/// nonzero `Q`-value: determinant −1 for q odd; for q even it is the
/// standard O ∖ Ω representative.
fn z_reflection(spec: &GroupSpec) -> MatrixFq {
    let field = spec.field.clone();
    let form = spec.form.as_ref().unwrap();
    let n = spec.n;
    let mut candidates: Vec<Vec<Fel>> = vec![];
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        candidates.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = 1;
            candidates.push(v);
        }
    }
    for v in candidates {
        let qv = form.q_value(&v);
        if qv == 0 {
            continue;
        }
        let qinv = field.inv(qv).unwrap();
        let mut rows = vec![];
        for i in 0..n {
            let mut u = vec![0; n];
            u[i] = 1;
            let c = field.mul(form.beta(&u, &v), qinv);
            let row: Vec<Fel> = (0..n)
                .map(|j| field.sub(u[j], field.mul(c, v[j])))
                .collect();
            rows.push(row);
        }
        let z = MatrixFq::from_rows(&field, &rows);
        debug_assert!(is_isometry(&z, form));
        return z;
    }
    unreachable!("nondegenerate quadratic spaces contain anisotropic vectors")
}

/// Element of SO ∖ Ω (q odd, n ≥ 3): `diag(c, 1, …, 1, c⁻¹)` for the first
/// `c` giving a nontrivial spinor norm.
fn z_so_not_omega(spec: &GroupSpec) -> Result<MatrixFq> {
    let field = spec.field.clone();
    let n = spec.n;
    let omega_spec = GroupSpec::new(Family::Omega, spec.tag, n, spec.q)?;
    for c in field.elements() {
        if c == 0 || c == 1 {
            continue;
        }
        let mut z = MatrixFq::identity(&field, n);
        z.set(0, 0, c);
        z.set(n - 1, n - 1, field.inv(c)?);
        if is_isometry(&z, spec.form.as_ref().unwrap()) && z.det() == 1 && !contains(&omega_spec, &z) {
            return Ok(z);
        }
    }
    Err(Error::InvalidSpec("no SO ∖ Ω torus element found".into()))
}

// ---------------------------------------------------------------------------
// Splitting criteria
// ---------------------------------------------------------------------------

/// Does the ambient O-class split into two SO-classes (q odd)? Yes iff no
/// `t ∓ 1` divisor carries an odd Jordan block.
fn splits_in_so(label: &ClassLabel) -> bool {
    for div in &label.divisors {
        if div.phi == PhiClass::Phi1 {
            if let UnipotentLabel::OddChar { v, .. } = &div.unipotent {
                if !v.is_empty() {
                    return false;
                }
            }
        }
    }
    true
}

/// Does the SO-class split into two Ω-classes (q odd, n ≥ 3)?
fn splits_in_omega_odd(field: &Field, label: &ClassLabel, n: usize) -> bool {
    if n <= 2 {
        return false;
    }
    // square class of (−1)^{k_i}·b_i, shared by all V entries of a divisor
    let mut unit_classes: Vec<bool> = vec![];
    for div in &label.divisors {
        match &div.phi {
            PhiClass::Phi1 => {
                let UnipotentLabel::OddChar { v, .. } = &div.unipotent else {
                    return false;
                };
                if v.is_empty() {
                    continue;
                }
                if v.iter().any(|&(_, _, a)| a != 1) {
                    return false;
                }
                let classes: Vec<bool> = v
                    .iter()
                    .map(|&(size, b, _)| {
                        let k = (size - 1) / 2;
                        let val = if k % 2 == 1 { field.neg(b) } else { b };
                        field.is_square(val)
                    })
                    .collect();
                if classes.iter().any(|&c| c != classes[0]) {
                    return false;
                }
                unit_classes.push(classes[0]);
            }
            _ => {
                let UnipotentLabel::Partition(parts) = &div.unipotent else {
                    return false;
                };
                if parts.iter().any(|&e| e % 2 == 1) {
                    return false;
                }
            }
        }
    }
    if unit_classes.len() == 2 && unit_classes[0] != unit_classes[1] {
        return false;
    }
    true
}

/// Does the O-class split into two Ω-classes (q even)? Yes iff the `t + 1`
/// part (if any) is a pure `⊕ W(m_i)^{a_i}` with all `m_i` even, and yes
/// whenever every divisor is Φ₂/Φ₃.
fn splits_in_omega_even(label: &ClassLabel) -> bool {
    for div in &label.divisors {
        if div.phi == PhiClass::Phi1 {
            let UnipotentLabel::EvenChar { w, v, w_alpha, v_alpha, .. } = &div.unipotent else {
                return false;
            };
            return v.is_empty()
                && v_alpha.is_empty()
                && w_alpha.is_empty()
                && w.iter().all(|&(m, _)| m % 2 == 0);
        }
    }
    true
}

/// GCD of all Jordan block sizes across all divisors and `base`.
fn parts_gcd(label: &ClassLabel, base: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut g = base;
    for div in &label.divisors {
        for part in div.unipotent.parts() {
            g = gcd(g, part as u64);
        }
    }
    g
}

// ---------------------------------------------------------------------------
// Listing
// ---------------------------------------------------------------------------

/// All conjugacy classes of `spec`: labels, in-group representatives,
/// class sizes and centralizer orders. Deterministic order.
pub fn list_classes(spec: &GroupSpec) -> Result<Vec<ClassRep>> {
    let mut out = match spec.family {
        Family::GL | Family::SL => list_linear(spec)?,
        _ => list_isometry(spec)?,
    };
    out.sort_by(|a, b| {
        let ka = label_sort_key(&a.label);
        let kb = label_sort_key(&b.label);
        ka.cmp(&kb)
    });
    Ok(out)
}

fn label_sort_key(label: &ClassLabel) -> (usize, String, usize) {
    let degs: usize = label.divisors.len();
    (degs, label.to_string(), label.coset)
}

/// Only the unipotent classes: the single-divisor `t − 1` entries of the
/// full listing.
pub fn unipotent_classes(spec: &GroupSpec) -> Result<Vec<ClassRep>> {
    let t1 = Poly::t_minus(&spec.field, 1);
    Ok(list_classes(spec)?
        .into_iter()
        .filter(|c| c.label.divisors.len() == 1 && c.label.divisors[0].f == t1)
        .collect())
}

/// Only the semisimple classes: every Jordan block size 1.
pub fn semisimple_classes(spec: &GroupSpec) -> Result<Vec<ClassRep>> {
    Ok(list_classes(spec)?
        .into_iter()
        .filter(|c| {
            c.label
                .divisors
                .iter()
                .all(|d| d.unipotent.parts().iter().all(|&e| e == 1))
        })
        .collect())
}

fn list_linear(spec: &GroupSpec) -> Result<Vec<ClassRep>> {
    let field = &spec.field;
    let n = spec.n;
    let q = spec.q;
    let mut pool = vec![];
    for deg in 1..=n {
        for f in monic_irreducibles(field, deg) {
            if f.coeff(0) != 0 {
                pool.push(DivisorCandidate {
                    phi: phi_classify(&f)?,
                    f,
                });
            }
        }
    }
    pool.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.f.grlex_cmp(&b.f))
    });
    let special = spec.family == Family::SL;
    let mut out = vec![];
    for assignment in multiplicity_assignments(&pool, n) {
        // every partition combination per divisor
        let per_divisor: Vec<Vec<Vec<usize>>> = assignment
            .iter()
            .map(|(_, m)| partitions_of(*m))
            .collect();
        for combo in cartesian(&per_divisor) {
            let mut divisors = vec![];
            let mut blocks = vec![];
            for ((cand, _), parts) in assignment.iter().zip(&combo) {
                for &e in parts {
                    blocks.push(MatrixFq::companion(&cand.f.pow(e)));
                }
                divisors.push(DivisorLabel {
                    f: cand.f.clone(),
                    phi: cand.phi.clone(),
                    unipotent: UnipotentLabel::Partition(parts.clone()),
                });
            }
            let rep = MatrixFq::direct_sum(&blocks);
            if special && rep.det() != 1 {
                continue;
            }
            let label = ClassLabel { divisors, coset: 0 };
            let split = if special {
                parts_gcd(&label, q - 1) as usize
            } else {
                1
            };
            let (size, centralizer_order) = class_size_and_centralizer(spec, &label, split)?;
            let z = if split > 1 { Some(z_linear(spec)) } else { None };
            let mut conj = MatrixFq::identity(field, n);
            for j in 0..split {
                let mut lab = label.clone();
                lab.coset = j;
                out.push(ClassRep {
                    label: lab,
                    rep: rep.conjugate_by(&conj),
                    size,
                    centralizer_order,
                });
                if let Some(z) = &z {
                    conj = conj.mul(z);
                }
            }
        }
    }
    Ok(out)
}

fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![vec![]];
    for opts in options {
        let mut next = vec![];
        for prefix in &out {
            for o in opts {
                let mut row = prefix.clone();
                row.push(o.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

fn list_isometry(spec: &GroupSpec) -> Result<Vec<ClassRep>> {
    let field = spec.field.clone();
    let spec_form = spec.form.clone().expect("isometry families carry a form");
    let kind = spec_form.kind();
    let n = spec.n;
    let pool = isometry_divisor_pool(spec)?;
    let ambient = spec.isometry_group();
    let mut out = vec![];
    for assignment in multiplicity_assignments(&pool, n) {
        // options per divisor: (unipotent label, block)
        let mut per_divisor: Vec<Vec<(UnipotentLabel, Block)>> = vec![];
        let mut feasible = true;
        for (cand, m) in &assignment {
            let options = match &cand.phi {
                PhiClass::Phi1 => {
                    let lambda = field.neg(cand.f.coeff(0));
                    phi1_options(&field, kind, lambda, *m)?
                }
                PhiClass::Phi2 { g } => partitions_of(*m)
                    .into_iter()
                    .map(|parts| {
                        phi2_divisor_block(g, &parts, kind)
                            .map(|blk| (UnipotentLabel::Partition(parts), blk))
                    })
                    .collect::<Result<Vec<_>>>()?,
                PhiClass::Phi3 => partitions_of(*m)
                    .into_iter()
                    .map(|parts| {
                        phi3_divisor_block(&cand.f, &parts, kind)
                            .map(|blk| (UnipotentLabel::Partition(parts), blk))
                    })
                    .collect::<Result<Vec<_>>>()?,
                PhiClass::None => return Err(Error::InvalidSpec("divisor not in Φ".into())),
            };
            if options.is_empty() {
                feasible = false;
                break;
            }
            per_divisor.push(options);
        }
        if !feasible {
            continue;
        }
        for combo in cartesian_refs(&per_divisor) {
            let mut divisors = vec![];
            let mut blocks = vec![];
            let mut grams = vec![];
            for ((cand, _), (unip, (x, form))) in assignment.iter().zip(&combo) {
                blocks.push(x.clone());
                grams.push(form.gram().clone());
                divisors.push(DivisorLabel {
                    f: cand.f.clone(),
                    phi: cand.phi.clone(),
                    unipotent: unip.clone(),
                });
            }
            let x = MatrixFq::direct_sum(&blocks);
            let total = match Form::new(kind, MatrixFq::direct_sum(&grams)) {
                Ok(f) => f,
                Err(_) => continue,
            };
            let t = match congruence_transform(&spec_form, &total) {
                Ok(t) => t,
                Err(_) => continue, // wrong type/discriminant for this group
            };
            let rep = x.conjugate_by(&t);
            debug_assert!(is_isometry(&rep, &spec_form));
            debug_assert!(contains(&ambient, &rep));
            if !contains(spec, &rep) {
                continue;
            }
            let label = ClassLabel { divisors, coset: 0 };
            out.extend(finalize_isometry_class(spec, label, rep)?);
        }
    }
    Ok(out)
}

fn cartesian_refs<'a, T>(options: &'a [Vec<T>]) -> Vec<Vec<&'a T>> {
    let mut out: Vec<Vec<&T>> = vec![vec![]];
    for opts in options {
        let mut next = vec![];
        for prefix in &out {
            for o in opts {
                let mut row = prefix.clone();
                row.push(o);
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Split an ambient-class representative into the classes of the chosen
/// subgroup family and attach sizes.
fn finalize_isometry_class(
    spec: &GroupSpec,
    label: ClassLabel,
    rep: MatrixFq,
) -> Result<Vec<ClassRep>> {
    let field = spec.field.clone();
    let even = field.p() == 2;
    // conjugators: identity plus the coset moves that produce new classes
    let mut conjugators: Vec<(MatrixFq, bool)> = vec![(MatrixFq::identity(&field, spec.n), false)];
    match spec.family {
        Family::U | Family::Sp | Family::O => {}
        Family::SU => {
            let t = parts_gcd(&label, spec.q + 1) as usize;
            if t > 1 {
                let z = z_unitary(spec);
                let mut acc = z.clone();
                for _ in 1..t {
                    conjugators.push((acc.clone(), false));
                    acc = acc.mul(&z);
                }
            }
        }
        Family::SO => {
            if !even && splits_in_so(&label) {
                conjugators.push((z_reflection(spec), false));
            }
        }
        Family::Omega => {
            let so_split = !even && splits_in_so(&label);
            let omega_split = if even {
                splits_in_omega_even(&label)
            } else {
                splits_in_omega_odd(&field, &label, spec.n)
            };
            let mut moves: Vec<(MatrixFq, bool)> = vec![];
            if omega_split {
                let z = if even {
                    z_reflection(spec)
                } else {
                    z_so_not_omega(spec)?
                };
                // mark the second class of a q-even t+1 split (the W′ twin)
                moves.push((z, even));
            }
            if so_split {
                let z1 = z_reflection(spec);
                for (m, _) in moves.clone() {
                    moves.push((z1.mul(&m), false));
                }
                moves.push((z1, false));
            }
            conjugators.extend(moves);
        }
        Family::GL | Family::SL => unreachable!(),
    }
    let split = conjugators.len();
    let (size, centralizer_order) = class_size_and_centralizer(spec, &label, split)?;
    let mut out = vec![];
    for (j, (z, mark_prime)) in conjugators.into_iter().enumerate() {
        let mut lab = label.clone();
        lab.coset = j;
        if mark_prime {
            for div in &mut lab.divisors {
                if let UnipotentLabel::EvenChar { w_prime, .. } = &mut div.unipotent {
                    *w_prime = true;
                }
            }
        }
        let r = rep.conjugate_by(&z);
        debug_assert!(contains(spec, &r));
        out.push(ClassRep {
            label: lab,
            rep: r,
            size,
            centralizer_order,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Canonical block data for the conjugacy and centralizer machinery
// ---------------------------------------------------------------------------

/// Block-diagonal canonical model of one ambient class: `j` is the direct
/// sum of the per-divisor blocks, each an isometry of its block form, and
/// `rep = t⁻¹·j·t` is the listed representative, where `t·B·t* = F` carries
/// the group form to the block form. For the linear family `t` is the
/// identity and the block forms are absent.
#[derive(Clone)]
pub(crate) struct CanonicalClass {
    pub label: ClassLabel,
    pub blocks: Vec<(MatrixFq, Option<Form>)>,
    pub j: MatrixFq,
    pub t: MatrixFq,
    pub rep: MatrixFq,
}

/// Every canonical ambient class whose generalized elementary divisors
/// equal `eds`, with its block data. `spec` must be an ambient family
/// (GL or a full isometry group).
pub(crate) fn canonical_classes_with_eds(
    spec: &GroupSpec,
    eds: &ElementaryDivisorList,
) -> Result<Vec<CanonicalClass>> {
    match spec.family {
        Family::GL => canonical_linear(spec, eds),
        Family::U | Family::Sp | Family::O => canonical_isometry(spec, eds),
        _ => Err(Error::InvalidSpec(
            "canonical block data is defined for ambient families only".into(),
        )),
    }
}

fn canonical_linear(
    spec: &GroupSpec,
    eds: &ElementaryDivisorList,
) -> Result<Vec<CanonicalClass>> {
    let field = &spec.field;
    let mut factors = eds.factors();
    factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.grlex_cmp(b)));
    if factors.iter().any(|f| f.coeff(0) == 0) {
        return Ok(vec![]); // not invertible
    }
    let mut divisors = vec![];
    let mut blocks = vec![];
    for f in &factors {
        let parts = eds.partition_of(f);
        let mut block = vec![];
        for &e in &parts {
            block.push(MatrixFq::companion(&f.pow(e)));
        }
        blocks.push((MatrixFq::direct_sum(&block), None));
        divisors.push(DivisorLabel {
            f: f.clone(),
            phi: phi_classify(f)?,
            unipotent: UnipotentLabel::Partition(parts),
        });
    }
    let j = MatrixFq::direct_sum(&blocks.iter().map(|(m, _)| m.clone()).collect::<Vec<_>>());
    if j.n() != spec.n {
        return Ok(vec![]);
    }
    Ok(vec![CanonicalClass {
        label: ClassLabel { divisors, coset: 0 },
        rep: j.clone(),
        t: MatrixFq::identity(field, spec.n),
        j,
        blocks,
    }])
}

fn canonical_isometry(
    spec: &GroupSpec,
    eds: &ElementaryDivisorList,
) -> Result<Vec<CanonicalClass>> {
    let field = spec.field.clone();
    let spec_form = spec.form.clone().expect("isometry families carry a form");
    let kind = spec_form.kind();
    // The assignment of divisor multiplicities is forced by the divisors.
    let mut assignment: Vec<(DivisorCandidate, usize, Vec<usize>)> = vec![];
    let mut covered = 0usize;
    for cand in isometry_divisor_pool(spec)? {
        let parts = match &cand.phi {
            PhiClass::Phi2 { g } => {
                let pg = eds.partition_of(g);
                let pd = eds.partition_of(&g.dual()?);
                if pg != pd {
                    return Ok(vec![]); // dual pair multiplicities must agree
                }
                pg
            }
            _ => eds.partition_of(&cand.f),
        };
        if parts.is_empty() {
            continue;
        }
        let m: usize = parts.iter().sum();
        covered += m * cand.degree();
        assignment.push((cand, m, parts));
    }
    if covered != spec.n || eds.total_degree() != spec.n {
        return Ok(vec![]); // some divisor is not admissible for the family
    }
    // Options per divisor, restricted to the target Jordan partition.
    let mut per_divisor: Vec<Vec<(UnipotentLabel, Block)>> = vec![];
    for (cand, m, parts) in &assignment {
        let options: Vec<(UnipotentLabel, Block)> = match &cand.phi {
            PhiClass::Phi1 => {
                let lambda = field.neg(cand.f.coeff(0));
                phi1_options(&field, kind, lambda, *m)?
                    .into_iter()
                    .filter(|(u, _)| &u.parts() == parts)
                    .collect()
            }
            PhiClass::Phi2 { g } => {
                let blk = phi2_divisor_block(g, parts, kind)?;
                vec![(UnipotentLabel::Partition(parts.clone()), blk)]
            }
            PhiClass::Phi3 => {
                let blk = phi3_divisor_block(&cand.f, parts, kind)?;
                vec![(UnipotentLabel::Partition(parts.clone()), blk)]
            }
            PhiClass::None => return Err(Error::InvalidSpec("divisor not in Φ".into())),
        };
        if options.is_empty() {
            return Ok(vec![]);
        }
        per_divisor.push(options);
    }
    let mut out = vec![];
    for combo in cartesian_refs(&per_divisor) {
        let mut divisors = vec![];
        let mut blocks = vec![];
        for ((cand, _, _), (unip, (x, form))) in assignment.iter().zip(&combo) {
            blocks.push((x.clone(), Some(form.clone())));
            divisors.push(DivisorLabel {
                f: cand.f.clone(),
                phi: cand.phi.clone(),
                unipotent: unip.clone(),
            });
        }
        let j = MatrixFq::direct_sum(
            &blocks.iter().map(|(m, _)| m.clone()).collect::<Vec<_>>(),
        );
        let total = match Form::new(
            kind,
            MatrixFq::direct_sum(
                &blocks
                    .iter()
                    .map(|(_, f)| f.as_ref().unwrap().gram().clone())
                    .collect::<Vec<_>>(),
            ),
        ) {
            Ok(f) => f,
            Err(_) => continue,
        };
        let t = match congruence_transform(&spec_form, &total) {
            Ok(t) => t,
            Err(_) => continue, // wrong type/discriminant for this group
        };
        let rep = j.conjugate_by(&t);
        debug_assert!(is_isometry(&rep, &spec_form));
        out.push(CanonicalClass {
            label: ClassLabel { divisors, coset: 0 },
            blocks,
            j,
            t,
            rep,
        });
    }
    Ok(out)
}

/// The canonical class label of an element: locate the listed class the
/// element belongs to.
pub fn class_invariant(spec: &GroupSpec, x: &MatrixFq) -> Result<ClassLabel> {
    if !contains(spec, x) {
        return Err(Error::NotInGroup);
    }
    let eds = elementary_divisors(x)?;
    for class in list_classes(spec)? {
        if elementary_divisors(&class.rep)? != eds {
            continue;
        }
        if crate::conjugacy::is_conjugate(spec, x, &class.rep)? {
            return Ok(class.label);
        }
    }
    Err(Error::InvalidSpec(
        "element matched no listed class".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::group_order;
    use crate::oracle::{brute_classes, enumerate_group};

    fn spec(name: &str, n: usize, q: u64) -> GroupSpec {
        GroupSpec::from_name(name, n, q).unwrap()
    }

    /// The listed classes must biject with the oracle's orbit partition:
    /// same count, and each listed rep lies in a distinct orbit with
    /// matching size.
    fn check_against_oracle(spec: &GroupSpec) {
        let listed = list_classes(spec).unwrap();
        let group = enumerate_group(spec).unwrap();
        let orbits = brute_classes(&group);
        assert_eq!(
            listed.len(),
            orbits.len(),
            "class count mismatch for {}",
            spec.name()
        );
        let mut seen = vec![false; orbits.len()];
        for class in &listed {
            let pos = group
                .position(&class.rep)
                .unwrap_or_else(|| panic!("rep not in {}", spec.name()));
            let oi = orbits
                .iter()
                .position(|orb| orb.binary_search(&pos).is_ok())
                .unwrap();
            assert!(
                !seen[oi],
                "two reps in the same class of {}: {}",
                spec.name(),
                class.label
            );
            seen[oi] = true;
            assert_eq!(
                class.size,
                orbits[oi].len() as u128,
                "class size mismatch for {} in {}",
                class.label,
                spec.name()
            );
            assert_eq!(
                class.size * class.centralizer_order,
                group_order(spec),
                "orbit-stabilizer violated for {} in {}",
                class.label,
                spec.name()
            );
        }
    }

    #[test]
    fn gl_and_sl_small() {
        check_against_oracle(&spec("GL", 2, 3)); // 8 classes
        assert_eq!(list_classes(&spec("GL", 2, 3)).unwrap().len(), 8);
        check_against_oracle(&spec("SL", 2, 3));
        check_against_oracle(&spec("GL", 2, 4));
        check_against_oracle(&spec("SL", 2, 5)); // J₂ splits into 2
        check_against_oracle(&spec("GL", 3, 2));
    }

    #[test]
    fn unitary_small() {
        check_against_oracle(&spec("U", 2, 2));
        check_against_oracle(&spec("SU", 2, 3));
        check_against_oracle(&spec("U", 3, 2));
        check_against_oracle(&spec("SU", 3, 2));
    }

    #[test]
    fn symplectic_small() {
        // Sp(2,3): 3 unipotent classes, 7 classes total summing to 24
        let sp23 = spec("Sp", 2, 3);
        let unip = unipotent_classes(&sp23).unwrap();
        assert_eq!(unip.len(), 3);
        let all = list_classes(&sp23).unwrap();
        assert_eq!(all.len(), 7);
        assert_eq!(all.iter().map(|c| c.size).sum::<u128>(), 24);
        check_against_oracle(&sp23);
        check_against_oracle(&spec("Sp", 2, 5));
        check_against_oracle(&spec("Sp", 2, 2));
        check_against_oracle(&spec("Sp", 4, 2));
        check_against_oracle(&spec("Sp", 4, 3));
    }

    #[test]
    fn orthogonal_odd_q_small() {
        check_against_oracle(&spec("O", 3, 3));
        check_against_oracle(&spec("SO", 3, 3));
        check_against_oracle(&spec("Omega", 3, 3));
        check_against_oracle(&spec("O+", 4, 3));
        check_against_oracle(&spec("O-", 4, 3));
        check_against_oracle(&spec("SO+", 4, 3));
        check_against_oracle(&spec("SO-", 4, 3));
        check_against_oracle(&spec("Omega+", 4, 3));
        check_against_oracle(&spec("Omega-", 4, 3));
        check_against_oracle(&spec("O+", 2, 5));
        check_against_oracle(&spec("Omega-", 2, 5));
    }

    #[test]
    fn orthogonal_even_q_small() {
        check_against_oracle(&spec("O+", 4, 2));
        check_against_oracle(&spec("O-", 4, 2));
        check_against_oracle(&spec("Omega+", 4, 2));
        check_against_oracle(&spec("Omega-", 4, 2));
        check_against_oracle(&spec("O+", 2, 4));
        check_against_oracle(&spec("O-", 2, 4));
    }

    #[test]
    fn class_equation_holds_medium() {
        // beyond oracle scale for enumeration of every group: the class
        // equation still pins the listing down
        for (name, n, q) in [
            ("GL", 3, 3),
            ("SL", 3, 3),
            ("Sp", 4, 5),
            ("U", 3, 3),
            ("O+", 6, 2),
            ("O-", 6, 2),
            ("Omega+", 6, 2),
            ("Omega-", 6, 2),
            ("Sp", 6, 2),
            ("SO", 5, 3),
        ] {
            let s = spec(name, n, q);
            let classes = list_classes(&s).unwrap();
            let total: u128 = classes.iter().map(|c| c.size).sum();
            assert_eq!(total, group_order(&s), "class equation for {}", s.name());
            for c in &classes {
                assert!(contains(&s, &c.rep), "rep outside {}", s.name());
            }
        }
    }
}
