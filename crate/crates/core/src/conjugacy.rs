//! Conjugacy decision and explicit conjugating elements.
//!
//! Two elements of a classical group `G ≤ GL(V)` are `G`-conjugate iff
//! (a) they are GL-conjugate (same generalized elementary divisors), (b) a
//! GL-conjugator can be corrected to an isometry of the form, and (c) for
//! the special/Ω subgroups the isometry can be further corrected inside the
//! ambient centralizer to prescribed determinant and spinor norm.
//!
//! Construction: both elements are reduced to the same canonical
//! block-diagonal model `J` (one block per generalized elementary divisor)
//! by a GL-conjugator; the form each drags along is block-diagonal, and a
//! per-block correction `W ∈ C_GL(J)` carrying one form to the other is
//! assembled from a congruence transform followed by a conjugation inside
//! the block isometry group. The block conjugation is found by an orbit
//! search whose Schreier elements also generate the block centralizer,
//! which supplies the determinant/spinor corrections for the subgroups.

use std::collections::HashMap;

use crate::classes::{canonical_classes_with_eds, CanonicalClass};
use crate::error::{Error, Result};
use crate::field::{Fel, Field};
use crate::forms::{
    congruence_transform, form_type, is_isometry, spinor_norm, Form, FormKind,
};
use crate::groups::{contains, group_order, Family, GroupSpec};
use crate::matrix::{
    elementary_divisors, gl_conjugator, ElementaryDivisorList, ExtField, MatrixFq,
};
use crate::oracle::{enumerate_group_with_cap, DEFAULT_MAX_ORDER};
use crate::poly::Poly;

/// Node limit for the block conjugation orbit search.
const ORBIT_SEARCH_CAP: usize = 400_000;

/// Outcome of a conjugacy test: a decision, a witness when conjugate, and a
/// structured reason when not.
#[derive(Clone, Debug)]
pub struct ConjugacyCertificate {
    pub conjugate: bool,
    /// `z` with `z⁻¹·x·z = y`, when conjugate.
    pub witness: Option<MatrixFq>,
    /// Human-readable mismatch report, when not conjugate.
    pub reason: Option<String>,
}

/// An element `g ∈ G` with `g⁻¹·x·g = y`, or `None` when `x` and `y` are
/// not conjugate in `G`.
pub fn conjugator(spec: &GroupSpec, x: &MatrixFq, y: &MatrixFq) -> Result<Option<MatrixFq>> {
    Ok(conjugacy_certificate(spec, x, y)?.witness)
}

/// Are `x` and `y` conjugate in the group?
pub fn is_conjugate(spec: &GroupSpec, x: &MatrixFq, y: &MatrixFq) -> Result<bool> {
    Ok(conjugacy_certificate(spec, x, y)?.conjugate)
}

/// Conjugacy decision with witness or reason.
pub fn conjugacy_certificate(
    spec: &GroupSpec,
    x: &MatrixFq,
    y: &MatrixFq,
) -> Result<ConjugacyCertificate> {
    if !contains(spec, x) || !contains(spec, y) {
        return Err(Error::NotInGroup);
    }
    let ex = elementary_divisors(x)?;
    let ey = elementary_divisors(y)?;
    if ex != ey {
        return Ok(not_conjugate(
            "generalized elementary divisors differ, so the elements are not \
             even GL-conjugate",
        ));
    }
    let witness = match spec.family {
        Family::GL => gl_conjugator(x, y)?,
        Family::SL => sl_conjugator(spec, x, y, &ex)?,
        Family::U | Family::Sp | Family::O => match isometry_witness(spec, x, y, &ex)? {
            IsometryOutcome::Witness(w) => Some(w),
            IsometryOutcome::TypeMismatch => {
                return Ok(not_conjugate(
                    "the forms induced on corresponding invariant summands have \
                     different type, so the elements are not conjugate in the \
                     isometry group",
                ))
            }
        },
        Family::SU | Family::SO | Family::Omega => {
            let ambient = spec.isometry_group();
            match isometry_witness(&ambient, x, y, &ex)? {
                IsometryOutcome::TypeMismatch => {
                    return Ok(not_conjugate(
                        "not conjugate in the ambient isometry group",
                    ))
                }
                IsometryOutcome::Witness(w) => {
                    if contains(spec, &w) {
                        Some(w)
                    } else {
                        let rx = reduce(&ambient, x, &ex)?
                            .ok_or_else(|| Error::Unsupported("reduction vanished".into()))?;
                        subgroup_correction(spec, &ambient, &rx, &w)?
                    }
                }
            }
        }
    };
    match witness {
        Some(w) => {
            debug_assert!(contains(spec, &w));
            debug_assert_eq!(x.conjugate_by(&w), *y);
            Ok(ConjugacyCertificate {
                conjugate: true,
                witness: Some(w),
                reason: None,
            })
        }
        None => Ok(not_conjugate(
            "conjugate in the ambient group, but every ambient conjugator has \
             forbidden determinant/spinor norm for this subgroup",
        )),
    }
}

/// In-group conjugator for unipotent elements (the inner step of the block
/// machinery, exposed per the interface).
pub fn unipotent_conjugator(
    spec: &GroupSpec,
    x: &MatrixFq,
    y: &MatrixFq,
) -> Result<Option<MatrixFq>> {
    if !x.is_unipotent() || !y.is_unipotent() {
        return Err(Error::InvalidSpec("arguments must be unipotent".into()));
    }
    conjugator(spec, x, y)
}

fn not_conjugate(reason: &str) -> ConjugacyCertificate {
    ConjugacyCertificate {
        conjugate: false,
        witness: None,
        reason: Some(reason.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Reduction of an element to the canonical block model
// ---------------------------------------------------------------------------

/// Reduction of `x` to its canonical ambient class representative:
/// `w⁻¹·x·w = canonical.rep`, with per-block Schreier generators of
/// `C_ambient(x)` already conjugated into `x`'s coordinates.
pub(crate) struct Reduction {
    pub canonical: CanonicalClass,
    pub w: MatrixFq,
    pub centralizer_gens: Vec<MatrixFq>,
}

enum IsometryOutcome {
    Witness(MatrixFq),
    TypeMismatch,
}

fn isometry_witness(
    ambient: &GroupSpec,
    x: &MatrixFq,
    y: &MatrixFq,
    eds: &ElementaryDivisorList,
) -> Result<IsometryOutcome> {
    let rx = match reduce(ambient, x, eds)? {
        Some(r) => r,
        None => return Ok(IsometryOutcome::TypeMismatch),
    };
    let ry = match reduce(ambient, y, eds)? {
        Some(r) => r,
        None => return Ok(IsometryOutcome::TypeMismatch),
    };
    if rx.canonical.label != ry.canonical.label {
        return Ok(IsometryOutcome::TypeMismatch);
    }
    Ok(IsometryOutcome::Witness(rx.w.mul(&ry.w.inverse()?)))
}

/// Reduce `x` to the unique canonical ambient class it belongs to. Returns
/// `None` when no canonical class matches (which cannot happen for a group
/// element unless the block data disagrees — the caller treats it as a
/// non-conjugacy signal).
pub(crate) fn reduce(
    ambient: &GroupSpec,
    x: &MatrixFq,
    eds: &ElementaryDivisorList,
) -> Result<Option<Reduction>> {
    let spec_form = ambient
        .form
        .as_ref()
        .expect("reduction is for isometry families");
    'cand: for cand in canonical_classes_with_eds(ambient, eds)? {
        let p = match gl_conjugator(x, &cand.j)? {
            Some(p) => p,
            None => continue,
        };
        let p_inv = p.inverse()?;
        // The form x preserves, pulled through to J's coordinates; it is
        // block-diagonal along the primary decomposition.
        let bx = spec_form.transform(&p_inv)?;
        let dims: Vec<usize> = cand.blocks.iter().map(|(m, _)| m.n()).collect();
        if !block_diagonal(bx.gram(), &dims) {
            continue;
        }
        let mut offset = 0usize;
        let mut w_blocks = vec![];
        let mut stab_blocks: Vec<(usize, Vec<MatrixFq>)> = vec![];
        for (jb, fb) in &cand.blocks {
            let fb = fb.as_ref().expect("isometry blocks carry forms");
            let d = jb.n();
            let b1 = Form::new(bx.kind(), bx.gram().block(offset, offset, d))?;
            // T with T·B1·T* = F_b.
            let t_b = match congruence_transform(&b1, fb) {
                Ok(t) => t,
                Err(_) => continue 'cand,
            };
            // J' = T·J·T⁻¹ is an isometry of F_b conjugate to J_b there
            // exactly when the candidate's block parameters match x.
            let jp = jb.conjugate_by(&t_b.inverse()?);
            let orbit = cached_block_orbit(jb, fb)?;
            let t_prime = match orbit.transporter.get(&matrix_key(&jp)) {
                Some(t) => t.clone(),
                None => continue 'cand,
            };
            // W_b = T'·T_b centralizes J_b and carries B1 to F_b.
            let w_b = t_prime.mul(&t_b);
            debug_assert_eq!(jb.conjugate_by(&w_b), *jb);
            w_blocks.push(w_b);
            stab_blocks.push((offset, orbit.stabilizer.clone()));
            offset += d;
        }
        let w_big = MatrixFq::direct_sum(&w_blocks);
        let w = p.mul(&w_big.inverse()?).mul(&cand.t);
        debug_assert!(is_isometry(&w, spec_form));
        debug_assert_eq!(x.conjugate_by(&w), cand.rep);
        // Conjugate the blockwise Schreier generators of C(J) into x's
        // coordinates: x = u·J·u⁻¹ with u = w·t⁻¹.
        let u = w.mul(&cand.t.inverse()?);
        let u_inv = u.inverse()?;
        let n = ambient.n;
        let field = &ambient.field;
        let mut centralizer_gens = vec![];
        let mut seen = HashMap::new();
        for (off, stab) in &stab_blocks {
            for s in stab {
                let mut big = MatrixFq::identity(field, n);
                big.set_block(*off, *off, s);
                let c = u.mul(&big).mul(&u_inv);
                debug_assert!(is_isometry(&c, spec_form));
                debug_assert_eq!(x.conjugate_by(&c), *x);
                if seen.insert(matrix_key(&c), ()).is_none() {
                    centralizer_gens.push(c);
                }
            }
        }
        return Ok(Some(Reduction {
            canonical: cand,
            w,
            centralizer_gens,
        }));
    }
    Ok(None)
}

fn block_diagonal(gram: &MatrixFq, dims: &[usize]) -> bool {
    let mut starts = vec![0usize];
    for d in dims {
        starts.push(starts.last().unwrap() + d);
    }
    let n = gram.n();
    let block_of = |i: usize| starts.iter().rposition(|&s| s <= i).unwrap();
    for i in 0..n {
        for j in 0..n {
            if gram.get(i, j) != 0 && block_of(i) != block_of(j) {
                return false;
            }
        }
    }
    true
}

fn matrix_key(m: &MatrixFq) -> Vec<Fel> {
    m.entries().to_vec()
}

fn form_key(f: &Form) -> Vec<Fel> {
    let mut k = matrix_key(f.gram());
    k.push(f.kind() as u64 as Fel);
    k
}

// ---------------------------------------------------------------------------
// Block orbit search with Schreier stabilizer generators
// ---------------------------------------------------------------------------

/// Process-wide cache of block orbits keyed by the block form and element;
/// the orbit search dominates the running time and recurs across calls.
fn cached_block_orbit(j: &MatrixFq, form: &Form) -> Result<std::sync::Arc<BlockOrbit>> {
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(u64, Vec<Fel>, Vec<Fel>), Arc<BlockOrbit>>>> =
        OnceLock::new();
    let key = (j.field().q(), form_key(form), matrix_key(j));
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let gens = cached_isometry_generators(form)?;
    let orbit = Arc::new(block_orbit(j, &gens, ORBIT_SEARCH_CAP)?);
    cache.lock().unwrap().insert(key, orbit.clone());
    Ok(orbit)
}

/// Process-wide cache of block isometry-group generating sets.
fn cached_isometry_generators(form: &Form) -> Result<Vec<MatrixFq>> {
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(u64, Vec<Fel>), Vec<MatrixFq>>>> = OnceLock::new();
    let key = (form.field().q(), form_key(form));
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let gens = isometry_group_generators(form)?;
    cache.lock().unwrap().insert(key, gens.clone());
    Ok(gens)
}

struct BlockOrbit {
    /// For each isometry `e` in the conjugation orbit of `j`: a transporter
    /// `T` with `T⁻¹·j·T = e`.
    transporter: HashMap<Vec<Fel>, MatrixFq>,
    /// Schreier generators of the centralizer of `j` in the isometry group.
    stabilizer: Vec<MatrixFq>,
}

/// Breadth-first enumeration of the conjugation orbit of `j` under the
/// group generated by `gens`, collecting transporters and the Schreier
/// generators of the stabilizer.
fn block_orbit(j: &MatrixFq, gens: &[MatrixFq], cap: usize) -> Result<BlockOrbit> {
    let mut transporter = HashMap::new();
    let identity = MatrixFq::identity(j.field(), j.n());
    transporter.insert(matrix_key(j), identity);
    let mut queue = vec![j.clone()];
    let mut stabilizer = vec![];
    let mut stab_seen = HashMap::new();
    let mut head = 0usize;
    while head < queue.len() {
        let e = queue[head].clone();
        head += 1;
        let t_e = transporter[&matrix_key(&e)].clone();
        for g in gens {
            let e2 = e.conjugate_by(g);
            let key = matrix_key(&e2);
            match transporter.get(&key) {
                None => {
                    if transporter.len() >= cap {
                        return Err(Error::Unsupported(format!(
                            "conjugation orbit exceeds the search cap of {cap}"
                        )));
                    }
                    transporter.insert(key, t_e.mul(g));
                    queue.push(e2);
                }
                Some(t_e2) => {
                    // Schreier generator of the stabilizer of j.
                    let s = t_e.mul(g).mul(&t_e2.inverse()?);
                    if !s.is_identity() && stab_seen.insert(matrix_key(&s), ()).is_none() {
                        debug_assert_eq!(j.conjugate_by(&s), *j);
                        stabilizer.push(s);
                    }
                }
            }
        }
    }
    Ok(BlockOrbit {
        transporter,
        stabilizer,
    })
}

/// A generating set for the isometry group of an arbitrary nondegenerate
/// form: the class representatives of the standard group of the same kind
/// and type, carried over by a congruence transform. A proper subgroup
/// cannot meet every conjugacy class, so class representatives always
/// generate the full group.
fn isometry_group_generators(form: &Form) -> Result<Vec<MatrixFq>> {
    let field = form.field().clone();
    let n = form.n();
    if n == 1 {
        // O(1) or U(1): the isometries are the norm-one scalars.
        let mut out = vec![];
        for c in field.elements() {
            if c == 0 {
                continue;
            }
            let m = MatrixFq::scalar(&field, 1, c);
            if is_isometry(&m, form) && !m.is_identity() {
                out.push(m);
            }
        }
        return Ok(out);
    }
    let name = match form.kind() {
        FormKind::Alternating => "Sp".to_string(),
        FormKind::Hermitian => "U".to_string(),
        FormKind::Symmetric | FormKind::Quadratic => match form_type(form)? {
            crate::forms::TypeTag::Plus => "O+".to_string(),
            crate::forms::TypeTag::Minus => "O-".to_string(),
            _ => "O".to_string(),
        },
    };
    let q = if form.kind() == FormKind::Hermitian {
        let mut r = 2u64;
        while r * r != field.q() {
            r += 1;
        }
        r
    } else {
        field.q()
    };
    let block_spec = GroupSpec::from_name(&name, n, q)?;
    let std_form = block_spec.form.clone().expect("isometry spec has a form");
    // T with T·F·T* = (scaled) standard form; scaling a form does not
    // change its isometry group, so it absorbs a discriminant mismatch for
    // odd-dimensional symmetric forms.
    let mut t = None;
    for c in field.elements() {
        if c == 0 {
            continue;
        }
        let scaled = Form::new(std_form.kind(), std_form.gram().scale(c))?;
        if let Ok(m) = congruence_transform(form, &scaled) {
            t = Some(m);
            break;
        }
    }
    let t = t.ok_or_else(|| {
        Error::Unsupported("form is not congruent to any scaled standard form".into())
    })?;
    let t_inv = t.inverse()?;
    let mut out = vec![];
    for class in crate::classes::list_classes(&block_spec)? {
        if class.rep.is_identity() {
            continue;
        }
        let g = t_inv.mul(&class.rep).mul(&t);
        debug_assert!(is_isometry(&g, form));
        out.push(g);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Subgroup corrections (SL, SU, SO, Ω)
// ---------------------------------------------------------------------------

/// Correct an ambient witness `w` by an element of `C_ambient(x)` so the
/// product lands in the subgroup, or report that none exists.
fn subgroup_correction(
    spec: &GroupSpec,
    ambient: &GroupSpec,
    rx: &Reduction,
    w: &MatrixFq,
) -> Result<Option<MatrixFq>> {
    // Close the image of the centralizer in the (small) signature group,
    // testing each coset representative against the subgroup.
    let mut reached: HashMap<(Fel, u8), MatrixFq> = HashMap::new();
    let identity = MatrixFq::identity(&spec.field, spec.n);
    reached.insert(signature(ambient, &identity)?, identity);
    let mut queue: Vec<MatrixFq> = reached.values().cloned().collect();
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head].clone();
        head += 1;
        let cw = c.mul(w);
        if contains(spec, &cw) {
            return Ok(Some(cw));
        }
        for g in &rx.centralizer_gens {
            let c2 = c.mul(g);
            let sig = signature(ambient, &c2)?;
            if let std::collections::hash_map::Entry::Vacant(e) = reached.entry(sig) {
                e.insert(c2.clone());
                queue.push(c2);
            }
        }
    }
    Ok(None)
}

/// The (determinant, spinor norm) signature classifying the subgroup cosets
/// of the ambient isometry group.
fn signature(ambient: &GroupSpec, m: &MatrixFq) -> Result<(Fel, u8)> {
    let theta = if ambient.family == Family::O {
        spinor_norm(m, ambient.form.as_ref().unwrap())?
    } else {
        0
    };
    Ok((m.det(), theta))
}

/// SL conjugator: a GL witness corrected to determinant one by an explicit
/// element of `C_GL(x)` built from a primitive element acting on one
/// companion block per divisor.
fn sl_conjugator(
    spec: &GroupSpec,
    x: &MatrixFq,
    y: &MatrixFq,
    _eds: &ElementaryDivisorList,
) -> Result<Option<MatrixFq>> {
    let g = match gl_conjugator(x, y)? {
        Some(g) => g,
        None => return Ok(None),
    };
    let d = g.det();
    if d == 1 {
        return Ok(Some(g));
    }
    match gl_centralizer_element_with_det(&spec.field, x, spec.field.inv(d)?)? {
        Some(c) => {
            let w = c.mul(&g);
            debug_assert_eq!(w.det(), 1);
            Ok(Some(w))
        }
        None => Ok(None),
    }
}

/// An element of `C_GL(x)` with prescribed determinant, or `None` when the
/// determinant image `(F*)^gcd(exponents)` does not contain it.
///
/// On the companion block of `f^λ`, evaluating a polynomial that reduces to
/// a primitive element of `F_q[t]/(f)` yields a centralizing unit of
/// determinant `ω^λ` (a norm of a primitive element is primitive); blocks
/// are combined by solving `Σ λ_i·u_i ≡ k (mod q−1)`.
pub(crate) fn gl_centralizer_element_with_det(
    field: &Field,
    x: &MatrixFq,
    target: Fel,
) -> Result<Option<MatrixFq>> {
    let q = field.q();
    let omega = primitive_element(field);
    let k = match dlog(field, omega, target) {
        Some(k) => k,
        None => return Err(Error::Unsupported("determinant not in F*".into())),
    };
    let eds = elementary_divisors(x)?;
    // Canonical GL model: one companion block per elementary divisor, in
    // (degree, grlex) factor order with descending exponents.
    let glspec = GroupSpec::from_name("GL", x.n(), q)?;
    let cands = canonical_classes_with_eds(&glspec, &eds)?;
    let cand = cands
        .first()
        .ok_or_else(|| Error::Unsupported("no GL canonical class".into()))?;
    let p = gl_conjugator(x, &cand.j)?
        .ok_or_else(|| Error::Unsupported("canonical GL model mismatch".into()))?;
    // Per elementary divisor f^λ: an offset and a primitive-norm unit of
    // determinant ω^λ.
    let mut offset = 0usize;
    let mut block_units: Vec<(usize, u64, MatrixFq)> = vec![];
    for div in &cand.label.divisors {
        let f = &div.f;
        let deg = f.degree();
        let parts = match &div.unipotent {
            crate::classes::UnipotentLabel::Partition(p) => p.clone(),
            _ => unreachable!("GL labels are plain partitions"),
        };
        let prim_poly = if deg == 1 {
            Poly::constant(field, omega)
        } else {
            let ext = ExtField::new(field, f, false)?;
            let prim = primitive_element(&ext.abs);
            Poly::new(field, ext.coords(prim).to_vec())
        };
        for &e in &parts {
            let d = deg * e;
            let jb = cand.j.block(offset, offset, d);
            let unit = jb.eval_poly(&prim_poly);
            debug_assert!(unit.is_invertible());
            // det(unit) = N(primitive)^e, a primitive element to the power e.
            let l = dlog(field, omega, unit.det())
                .ok_or_else(|| Error::Unsupported("determinant not in F*".into()))?;
            block_units.push((offset, l, unit));
            offset += d;
        }
    }
    // Solve Σ l_i·u_i ≡ k (mod q−1), where l_i = dlog(det of the i-th
    // block unit); solvable iff gcd(l_i, q−1) | k, found by a residue walk
    // over at most q−1 states.
    let modulus = (q - 1) as i128;
    let mut total_g = modulus;
    for (_, lam, _) in &block_units {
        total_g = gcd_i(total_g, *lam as i128);
    }
    if (k as i128) % total_g != 0 {
        return Ok(None);
    }
    let exps = match solve_exponents(&block_units, k as i128, modulus) {
        Some(e) => e,
        None => return Ok(None),
    };
    let mut c = MatrixFq::identity(field, x.n());
    for (i, (off, _, unit)) in block_units.iter().enumerate() {
        let e = exps[i].rem_euclid(modulus) as u64;
        if e == 0 {
            continue;
        }
        c.set_block(*off, *off, &unit.pow(e));
    }
    debug_assert_eq!(cand.j.conjugate_by(&c), cand.j);
    // Conjugate from J coordinates to x coordinates: x = p·J·p⁻¹? — the
    // convention is p⁻¹·x·p = J, so C(x) = p·C(J)·p⁻¹.
    let cx = p.mul(&c).mul(&p.inverse()?);
    debug_assert_eq!(x.conjugate_by(&cx), *x);
    if cx.det() != target {
        return Err(Error::Unsupported("determinant correction failed".into()));
    }
    Ok(Some(cx))
}

/// Exhaustive small search for `Σ λ_i·u_i ≡ k (mod m)`.
fn solve_exponents(
    blocks: &[(usize, u64, MatrixFq)],
    k: i128,
    m: i128,
) -> Option<Vec<i128>> {
    let lams: Vec<i128> = blocks.iter().map(|(_, l, _)| *l as i128).collect();
    let mut best: Option<Vec<i128>> = None;
    // BFS over residues reachable by adding single λ_i steps.
    let mut reach: HashMap<i128, Vec<i128>> = HashMap::new();
    reach.insert(0, vec![0; lams.len()]);
    let mut queue = vec![0i128];
    let mut head = 0;
    while head < queue.len() {
        let r = queue[head];
        head += 1;
        if r == k.rem_euclid(m) {
            best = Some(reach[&r].clone());
            break;
        }
        for (i, lam) in lams.iter().enumerate() {
            let r2 = (r + lam).rem_euclid(m);
            if !reach.contains_key(&r2) {
                let mut e = reach[&r].clone();
                e[i] += 1;
                reach.insert(r2, e);
                queue.push(r2);
            }
        }
    }
    best
}

fn gcd_i(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The least primitive element (multiplicative generator) of the field.
pub(crate) fn primitive_element(field: &Field) -> Fel {
    field
        .elements()
        .find(|&c| c != 0 && field.mult_order(c) == field.q() - 1)
        .expect("every finite field has a primitive element")
}

/// Discrete logarithm base `w` by enumeration (desk-scale fields).
fn dlog(field: &Field, w: Fel, target: Fel) -> Option<u64> {
    let mut acc: Fel = 1;
    for k in 0..field.q() {
        if acc == target {
            return Some(k);
        }
        acc = field.mul(acc, w);
    }
    None
}

// ---------------------------------------------------------------------------
// Oracle cross-checks and label agreement
// ---------------------------------------------------------------------------

/// Oracle cross-check helper: decide conjugacy by brute orbit enumeration
/// when the group is small enough.
pub fn is_conjugate_brute(spec: &GroupSpec, x: &MatrixFq, y: &MatrixFq) -> Result<bool> {
    if group_order(spec) > DEFAULT_MAX_ORDER as u128 {
        return Err(Error::CapExceeded {
            order: group_order(spec).min(u64::MAX as u128) as u64,
            cap: DEFAULT_MAX_ORDER,
        });
    }
    let g = enumerate_group_with_cap(spec, DEFAULT_MAX_ORDER)?;
    Ok(crate::oracle::brute_conjugator(&g, x, y).is_some())
}

/// Elements sent to the same label are conjugate and vice versa; an
/// independent route for cross-checking `is_conjugate`.
pub fn same_class_label(spec: &GroupSpec, x: &MatrixFq, y: &MatrixFq) -> Result<bool> {
    Ok(crate::classes::class_invariant(spec, x)? == crate::classes::class_invariant(spec, y)?)
}

/// Number of classes, for quick sanity checks.
pub fn class_count(spec: &GroupSpec) -> Result<usize> {
    Ok(crate::classes::list_classes(spec)?.len())
}

// ---------------------------------------------------------------------------
