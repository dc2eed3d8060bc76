//! Dense exact square matrices over a finite field, with the linear algebra
//! the rest of the crate is built on: elementary divisors, generalized
//! Jordan forms (companion blocks with identity super-blocks), Jordan
//! decomposition, GL-conjugators, and embeddings of `GL(m, q^r)` into
//! `GL(mr, q)`.
//!
//! Vectors are rows and matrices act on the right (`v ↦ v·X`), matching the
//! convention used throughout the forms and groups modules.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fel, Field, SubfieldEmbedding};
use crate::poly::Poly;

/// A dense `n × n` matrix over a finite field, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFq {
    field: Field,
    n: usize,
    e: Vec<Fel>,
}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over {:?}]", self.n, self.n, self.field)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl MatrixFq {
    pub fn zero(field: &Field, n: usize) -> MatrixFq {
        MatrixFq {
            field: field.clone(),
            n,
            e: vec![0; n * n],
        }
    }

    pub fn identity(field: &Field, n: usize) -> MatrixFq {
        let mut m = MatrixFq::zero(field, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn scalar(field: &Field, n: usize, c: Fel) -> MatrixFq {
        let mut m = MatrixFq::zero(field, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fel>]) -> MatrixFq {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        MatrixFq {
            field: field.clone(),
            n,
            e: rows.concat(),
        }
    }

    pub fn from_fn(field: &Field, n: usize, f: impl Fn(usize, usize) -> Fel) -> MatrixFq {
        let mut m = MatrixFq::zero(field, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// The companion matrix of a monic polynomial in row convention:
    /// `e_i ↦ e_{i+1}` for `i < d-1`, and `e_{d-1} ↦ -(a_0 e_0 + … + a_{d-1} e_{d-1})`.
    pub fn companion(f: &Poly) -> MatrixFq {
        assert!(f.is_monic() && f.degree() >= 1);
        let field = f.field().clone();
        let d = f.degree();
        let mut m = MatrixFq::zero(&field, d);
        for i in 0..d.saturating_sub(1) {
            m.set(i, i + 1, 1);
        }
        for j in 0..d {
            m.set(d - 1, j, field.neg(f.coeff(j)));
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Fel {
        self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fel) {
        self.e[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Fel> {
        self.e[i * self.n..(i + 1) * self.n].to_vec()
    }

    pub fn rows(&self) -> Vec<Vec<Fel>> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> &[Fel] {
        &self.e
    }

    pub fn is_identity(&self) -> bool {
        *self == MatrixFq::identity(&self.field, self.n)
    }

    pub fn mul(&self, other: &MatrixFq) -> MatrixFq {
        assert_eq!(self.n, other.n);
        let f = &self.field;
        let n = self.n;
        let mut out = MatrixFq::zero(f, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &MatrixFq) -> MatrixFq {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, &b) in out.e.iter_mut().zip(&other.e) {
            *a = self.field.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &MatrixFq) -> MatrixFq {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, &b) in out.e.iter_mut().zip(&other.e) {
            *a = self.field.sub(*a, b);
        }
        out
    }

    pub fn neg(&self) -> MatrixFq {
        let mut out = self.clone();
        for a in out.e.iter_mut() {
            *a = self.field.neg(*a);
        }
        out
    }

    pub fn scale(&self, c: Fel) -> MatrixFq {
        let mut out = self.clone();
        for a in out.e.iter_mut() {
            *a = self.field.mul(*a, c);
        }
        out
    }

    pub fn transpose(&self) -> MatrixFq {
        MatrixFq::from_fn(&self.field, self.n, |i, j| self.get(j, i))
    }

    /// Conjugate transpose `X* = bar(X)ᵗ` (plain transpose without bar).
    pub fn star(&self) -> MatrixFq {
        MatrixFq::from_fn(&self.field, self.n, |i, j| self.field.bar(self.get(j, i)))
    }

    /// Apply bar entrywise.
    pub fn bar(&self) -> MatrixFq {
        let mut out = self.clone();
        for a in out.e.iter_mut() {
            *a = self.field.bar(*a);
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> MatrixFq {
        let mut acc = MatrixFq::identity(&self.field, self.n);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[Fel]) -> Vec<Fel> {
        let f = &self.field;
        let n = self.n;
        let mut out = vec![0; n];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for j in 0..n {
                out[j] = f.add(out[j], f.mul(c, self.get(i, j)));
            }
        }
        out
    }

    /// Evaluate a polynomial at this matrix.
    pub fn eval_poly(&self, p: &Poly) -> MatrixFq {
        let mut acc = MatrixFq::zero(&self.field, self.n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..self.n {
                let cur = acc.get(i, i);
                acc.set(i, i, self.field.add(cur, c));
            }
        }
        acc
    }

    pub fn det(&self) -> Fel {
        let f = &self.field;
        let n = self.n;
        let mut m = self.e.clone();
        let mut det = f.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * n + col] != 0);
            let Some(pr) = pivot else { return 0 };
            if pr != col {
                for j in 0..n {
                    m.swap(pr * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = m[col * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv).unwrap();
            for r in col + 1..n {
                let factor = f.mul(m[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = f.mul(factor, m[col * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], sub);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }

    pub fn inverse(&self) -> Result<MatrixFq> {
        let n = self.n;
        let (rref, t, rank, _) = row_reduce(&self.field, &self.rows());
        if rank < n {
            return Err(Error::SingularElement);
        }
        // rref is the identity (square full-rank), so T·self = I.
        debug_assert!(MatrixFq::from_rows(&self.field, &rref).is_identity());
        Ok(MatrixFq::from_rows(&self.field, &t))
    }

    pub fn rank(&self) -> usize {
        row_reduce(&self.field, &self.rows()).2
    }

    /// Conjugate `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &MatrixFq) -> MatrixFq {
        g.inverse().expect("conjugating by a singular matrix").mul(self).mul(g)
    }

    /// Multiplicative order (the matrix must be invertible).
    pub fn order(&self) -> u64 {
        let id = MatrixFq::identity(&self.field, self.n);
        let mut acc = self.clone();
        let mut ord = 1u64;
        while acc != id {
            acc = acc.mul(self);
            ord += 1;
            assert!(ord < 1 << 40, "order computation diverged; matrix singular?");
        }
        ord
    }

    pub fn is_unipotent(&self) -> bool {
        // (X − 1)^n = 0
        let id = MatrixFq::identity(&self.field, self.n);
        let nilp = self.sub(&id);
        nilp.pow(self.n as u64) == MatrixFq::zero(&self.field, self.n)
    }

    /// Direct sum of blocks along the diagonal.
    pub fn direct_sum(blocks: &[MatrixFq]) -> MatrixFq {
        assert!(!blocks.is_empty());
        let field = blocks[0].field.clone();
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut out = MatrixFq::zero(&field, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    out.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n;
        }
        out
    }

    /// The `d×d` sub-block with top-left corner `(i0, j0)`.
    pub fn block(&self, i0: usize, j0: usize, d: usize) -> MatrixFq {
        MatrixFq::from_fn(&self.field, d, |i, j| self.get(i0 + i, j0 + j))
    }

    /// Paste `b` with top-left corner `(i0, j0)`.
    pub fn set_block(&mut self, i0: usize, j0: usize, b: &MatrixFq) {
        for i in 0..b.n {
            for j in 0..b.n {
                self.set(i0 + i, j0 + j, b.get(i, j));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Row-space linear algebra helpers (rectangular, rows over a field).
// ---------------------------------------------------------------------------

/// Row-reduce `rows`, returning `(rref, transform, rank, pivot_cols)` with
/// `transform · rows = rref` and `transform` invertible.
pub fn row_reduce(
    field: &Field,
    rows: &[Vec<Fel>],
) -> (Vec<Vec<Fel>>, Vec<Vec<Fel>>, usize, Vec<usize>) {
    let m = rows.len();
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut a: Vec<Vec<Fel>> = rows.to_vec();
    let mut t: Vec<Vec<Fel>> = (0..m)
        .map(|i| {
            let mut r = vec![0; m];
            r[i] = 1;
            r
        })
        .collect();
    let mut rank = 0;
    let mut pivots = vec![];
    for col in 0..width {
        let Some(pr) = (rank..m).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        t.swap(rank, pr);
        let inv = field.inv(a[rank][col]).unwrap();
        scale_row(field, &mut a[rank], inv);
        scale_row(field, &mut t[rank], inv);
        for r in 0..m {
            if r != rank && a[r][col] != 0 {
                let factor = a[r][col];
                let (ar, tr) = (a[rank].clone(), t[rank].clone());
                axpy(field, &mut a[r], &ar, field.neg(factor));
                axpy(field, &mut t[r], &tr, field.neg(factor));
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }
    (a, t, rank, pivots)
}

fn scale_row(field: &Field, row: &mut [Fel], c: Fel) {
    for x in row.iter_mut() {
        *x = field.mul(*x, c);
    }
}

fn axpy(field: &Field, dst: &mut [Fel], src: &[Fel], c: Fel) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = field.add(*d, field.mul(c, s));
    }
}

/// A basis (list of independent rows) of the span of `rows`.
pub fn row_space_basis(field: &Field, rows: &[Vec<Fel>]) -> Vec<Vec<Fel>> {
    let (rref, _, rank, _) = row_reduce(field, rows);
    rref.into_iter().take(rank).collect()
}

/// Left kernel of the linear map `v ↦ v·X`: a basis of `{v : v·X = 0}`,
/// where `X` is given by its rows (possibly rectangular `m × w`).
pub fn left_kernel(field: &Field, rows: &[Vec<Fel>]) -> Vec<Vec<Fel>> {
    let (_, t, rank, _) = row_reduce(field, rows);
    t.into_iter().skip(rank).collect()
}

/// Solve `x · rows = v` for a row vector `x`; `None` if unsolvable.
pub fn solve_row(field: &Field, rows: &[Vec<Fel>], v: &[Fel]) -> Option<Vec<Fel>> {
    let (rref, t, rank, pivots) = row_reduce(field, rows);
    let mut residual = v.to_vec();
    let mut coeffs = vec![0; rows.len()];
    for (r, &pc) in pivots.iter().enumerate().take(rank) {
        let c = residual[pc];
        if c != 0 {
            axpy(field, &mut residual, &rref[r], field.neg(c));
            // x += c · t[r]
            for (dst, &s) in coeffs.iter_mut().zip(&t[r]) {
                *dst = field.add(*dst, field.mul(c, s));
            }
        }
    }
    if residual.iter().all(|&c| c == 0) {
        Some(coeffs)
    } else {
        None
    }
}

/// Is `v` in the row span of `rows`?
pub fn in_row_span(field: &Field, rows: &[Vec<Fel>], v: &[Fel]) -> bool {
    solve_row(field, rows, v).is_some()
}

// ---------------------------------------------------------------------------
// Elementary divisors and canonical forms.
// ---------------------------------------------------------------------------

/// Elementary divisors of a matrix: entries `(f, e, multiplicity)` meaning
/// the divisor `f^e` occurs `multiplicity` times, sorted by `(f, e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryDivisorList {
    pub items: Vec<(Poly, usize, usize)>,
}

impl ElementaryDivisorList {
    pub fn total_degree(&self) -> usize {
        self.items
            .iter()
            .map(|(f, e, m)| f.degree() * e * m)
            .sum()
    }

    /// The partition of block exponents for a given irreducible factor.
    pub fn partition_of(&self, f: &Poly) -> Vec<usize> {
        let mut parts = vec![];
        for (g, e, m) in &self.items {
            if g == f {
                for _ in 0..*m {
                    parts.push(*e);
                }
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }

    /// The distinct irreducible factors, in stored (graded-lex) order.
    pub fn factors(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = vec![];
        for (f, _, _) in &self.items {
            if out.last() != Some(f) {
                out.push(f.clone());
            }
        }
        out
    }
}

/// The minimal polynomial, via Krylov spinning on the standard basis.
pub fn min_poly(x: &MatrixFq) -> Poly {
    let field = x.field().clone();
    let n = x.n();
    let mut m = Poly::one(&field);
    for seed in 0..n {
        let mut v = vec![0; n];
        v[seed] = 1;
        // The annihilator of v divides m if v's Krylov space is already
        // handled; always compute, cheap at this scale.
        let mut krylov: Vec<Vec<Fel>> = vec![v.clone()];
        loop {
            let next = x.apply_row(krylov.last().unwrap());
            if let Some(coeffs) = solve_row(&field, &krylov, &next) {
                // next = Σ c_i v X^i  ⇒  annihilator t^k − Σ c_i t^i
                let mut ann = vec![0; krylov.len() + 1];
                for (i, &c) in coeffs.iter().enumerate() {
                    ann[i] = field.neg(c);
                }
                ann[krylov.len()] = 1;
                let ann = Poly::new(&field, ann);
                m = lcm(&m, &ann);
                break;
            }
            krylov.push(next);
        }
    }
    m
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    a.mul(b).divrem(&a.gcd(b)).0.monic()
}

/// Elementary divisors of an invertible matrix.
pub fn elementary_divisors(x: &MatrixFq) -> Result<ElementaryDivisorList> {
    if !x.is_invertible() {
        return Err(Error::SingularElement);
    }
    let field = x.field().clone();
    let n = x.n();
    let mp = min_poly(x);
    let mut items = vec![];
    for (f, e_max) in mp.factorize() {
        let d = f.degree();
        // dim ker f(X)^j for j = 0..=e_max
        let mut dims = vec![0usize];
        let fx = x.eval_poly(&f);
        let mut power = MatrixFq::identity(&field, n);
        for _ in 1..=e_max {
            power = power.mul(&fx);
            dims.push(left_kernel(&field, &power.rows()).len());
        }
        // blocks with exponent ≥ j: (dims[j] − dims[j−1]) / d
        let blocks_ge: Vec<usize> = (1..=e_max)
            .map(|j| (dims[j] - dims[j - 1]) / d)
            .collect();
        for e in 1..=e_max {
            let ge_e = blocks_ge[e - 1];
            let ge_e1 = if e < e_max { blocks_ge[e] } else { 0 };
            if ge_e > ge_e1 {
                items.push((f.clone(), e, ge_e - ge_e1));
            }
        }
    }
    items.sort_by(|a, b| a.0.grlex_cmp(&b.0).then(a.1.cmp(&b.1)));
    let list = ElementaryDivisorList { items };
    debug_assert_eq!(list.total_degree(), n);
    Ok(list)
}

/// The characteristic polynomial (product of elementary divisors).
pub fn char_poly(x: &MatrixFq) -> Result<Poly> {
    let eds = elementary_divisors(x)?;
    let mut out = Poly::one(x.field());
    for (f, e, m) in &eds.items {
        out = out.mul(&f.pow(e * m));
    }
    Ok(out)
}

/// The Hensel root of the irreducible `f` in `F[t]/(f^e)`: the unique root
/// `λ̂` of `f` congruent to `t` modulo `f`, computed by Newton iteration.
pub fn hensel_root(f: &Poly, e: usize) -> Poly {
    let field = f.field().clone();
    let modulus = f.pow(e);
    let mut lam = Poly::t(&field).rem(&modulus);
    loop {
        let val = compose_mod(f, &lam, &modulus);
        if val.is_zero() {
            return lam;
        }
        let der = compose_mod(&f.derivative(), &lam, &modulus);
        let der_inv = poly_inverse_mod(&der, &modulus)
            .expect("f' (λ) is a unit modulo f^e for separable f");
        lam = lam.sub(&val.mul(&der_inv)).rem(&modulus);
    }
}

/// `g(h) mod m`.
pub fn compose_mod(g: &Poly, h: &Poly, m: &Poly) -> Poly {
    let field = g.field().clone();
    let mut acc = Poly::zero(&field);
    for &c in g.coeffs().iter().rev() {
        acc = acc.mul(h).add(&Poly::constant(&field, c)).rem(m);
    }
    acc
}

/// Inverse of `g` modulo `m` by extended Euclid; `None` if not coprime.
pub fn poly_inverse_mod(g: &Poly, m: &Poly) -> Option<Poly> {
    let field = g.field().clone();
    let (mut r0, mut r1) = (m.clone(), g.rem(m));
    let (mut s0, mut s1) = (Poly::zero(&field), Poly::one(&field));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s.rem(m));
    }
    if r0.degree() != 0 {
        return None;
    }
    let scale = field.inv(r0.coeff(0)).unwrap();
    Some(s0.scale(scale).rem(m))
}

/// The generalized Jordan form: `(J, P)` with `P X P⁻¹ = J`, where `J` is a
/// direct sum per irreducible factor `f` (graded-lex order) of blocks
/// `[[C_f, I], [0, C_f, I], …]` sorted by descending exponent.
pub fn jordan_form(x: &MatrixFq) -> Result<(MatrixFq, MatrixFq)> {
    if !x.is_invertible() {
        return Err(Error::SingularElement);
    }
    let field = x.field().clone();
    let n = x.n();
    let mp = min_poly(x);
    let mut factors: Vec<(Poly, usize)> = mp.factorize();
    factors.sort_by(|a, b| a.0.grlex_cmp(&b.0));

    let mut p_rows: Vec<Vec<Fel>> = vec![];
    let mut j_blocks: Vec<MatrixFq> = vec![];
    for (f, e_max) in &factors {
        let d = f.degree();
        // Primary component V_f = ker f(X)^{e_max}.
        let fx_pow = x.eval_poly(f).pow(*e_max as u64);
        let basis = left_kernel(&field, &fx_pow.rows());
        let m = basis.len();
        // Restriction X_f of X to V_f in the `basis` coordinates.
        let xf_rows: Vec<Vec<Fel>> = basis
            .iter()
            .map(|b| solve_row(&field, &basis, &x.apply_row(b)).expect("invariant subspace"))
            .collect();
        let xf = MatrixFq::from_rows(&field, &xf_rows);
        // S = λ̂(X_f) is the semisimple part on V_f; N = X_f − S is nilpotent
        // and commutes with S, so chains of N are E-linear for E = F[t]/(f).
        let lam = hensel_root(f, *e_max);
        let s = xf.eval_poly(&lam);
        let nil = xf.sub(&s);

        // Kernel flags of N inside V_f.
        let mut flags: Vec<Vec<Vec<Fel>>> = vec![vec![]]; // ker N^0 = 0
        let mut pw = MatrixFq::identity(&field, m);
        for _ in 1..=*e_max {
            pw = pw.mul(&nil);
            flags.push(left_kernel(&field, &pw.rows()));
        }
        // Choose chain tops level by level from the top.
        // `span` collects everything already chosen or forced (lower flags
        // plus N-images of higher chains), extended S-invariantly.
        let mut chains: Vec<(usize, Vec<Fel>)> = vec![]; // (height, top vector)
        for level in (1..=*e_max).rev() {
            let mut span: Vec<Vec<Fel>> = flags[level - 1].clone();
            for (h, top) in &chains {
                // N^{h−level}·top and its S-orbit lie in ker N^level
                let mut v = top.clone();
                for _ in 0..(h - level) {
                    v = nil.apply_row(&v);
                }
                for _ in 0..d {
                    span.push(v.clone());
                    v = s.apply_row(&v);
                }
            }
            let mut span = row_space_basis(&field, &span);
            for cand in flags[level].clone() {
                if in_row_span(&field, &span, &cand) {
                    continue;
                }
                chains.push((level, cand.clone()));
                let mut v = cand;
                for _ in 0..d {
                    span.push(v.clone());
                    v = s.apply_row(&v);
                }
                span = row_space_basis(&field, &span);
            }
            debug_assert_eq!(span.len(), flags[level].len());
        }
        chains.sort_by(|a, b| b.0.cmp(&a.0));

        // Emit basis rows v·N^a·S^b (a-major) per chain; in this basis the
        // block is companion-diagonal with identity super-blocks.
        let c_f = MatrixFq::companion(f);
        for (height, top) in &chains {
            let mut na = top.clone();
            for a in 0..*height {
                let mut v = na.clone();
                for _b in 0..d {
                    // map back to ambient coordinates
                    let mut ambient = vec![0; n];
                    for (ci, &c) in v.iter().enumerate() {
                        if c != 0 {
                            for j in 0..n {
                                ambient[j] = field.add(ambient[j], field.mul(c, basis[ci][j]));
                            }
                        }
                    }
                    p_rows.push(ambient);
                    v = s.apply_row(&v);
                }
                if a + 1 < *height {
                    na = nil.apply_row(&na);
                }
            }
            // The J block for this chain.
            let bd = height * d;
            let mut jb = MatrixFq::zero(&field, bd);
            for a in 0..*height {
                jb.set_block(a * d, a * d, &c_f);
                if a + 1 < *height {
                    for t in 0..d {
                        jb.set(a * d + t, (a + 1) * d + t, 1);
                    }
                }
            }
            j_blocks.push(jb);
        }
    }
    let p = MatrixFq::from_rows(&field, &p_rows);
    let j = MatrixFq::direct_sum(&j_blocks);
    debug_assert_eq!(p.mul(x), j.mul(&p));
    Ok((j, p))
}

/// `Z` with `Z⁻¹·X·Z = Y`, or `None` when X and Y are not GL-conjugate.
pub fn gl_conjugator(x: &MatrixFq, y: &MatrixFq) -> Result<Option<MatrixFq>> {
    let (jx, px) = jordan_form(x)?;
    let (jy, py) = jordan_form(y)?;
    if jx != jy {
        return Ok(None);
    }
    let z = px.inverse()?.mul(&py);
    debug_assert_eq!(x.mul(&z), z.mul(y));
    Ok(Some(z))
}

/// The multiplicative Jordan decomposition `x = s·u = u·s` with `s`
/// semisimple and `u` unipotent.
pub fn jordan_decomposition(x: &MatrixFq) -> Result<(MatrixFq, MatrixFq)> {
    let (_, p) = jordan_form(x)?;
    // The semisimple part of J keeps the companion diagonal and drops the
    // identity super-blocks; detect block boundaries via the divisor data.
    let field = x.field().clone();
    let n = x.n();
    let eds = elementary_divisors(x)?;
    let mut factors: Vec<(Poly, usize, usize)> = eds.items.clone();
    factors.sort_by(|a, b| a.0.grlex_cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut js = MatrixFq::zero(&field, n);
    let mut off = 0;
    for (f, e, mult) in &factors {
        let d = f.degree();
        let c_f = MatrixFq::companion(f);
        for _ in 0..*mult {
            for a in 0..*e {
                js.set_block(off + a * d, off + a * d, &c_f);
            }
            off += e * d;
        }
    }
    let pinv = p.inverse()?;
    let s = pinv.mul(&js).mul(&p);
    let u = s.inverse()?.mul(x);
    debug_assert_eq!(s.mul(&u), u.mul(&s));
    debug_assert!(u.is_unipotent());
    Ok((s, u))
}

// ---------------------------------------------------------------------------
// Extension-field embeddings: GL(m, q^r) ↪ GL(mr, q).
// ---------------------------------------------------------------------------

/// The extension `E = F_q[t]/(f)` of a base field by an irreducible `f`,
/// realized inside the absolute field `F_{p^{k·r}}` via the least root of
/// `f`, with relative-coordinate tables in both directions.
#[derive(Debug, Clone)]
pub struct ExtField {
    pub base: Field,
    pub abs: Field,
    pub f: Poly,
    /// The chosen (least) root of `f` in `abs`.
    pub zeta: Fel,
    base_emb: SubfieldEmbedding,
    /// Relative coordinates: abs element → its length-r vector over base.
    rel: Vec<Vec<Fel>>,
}

impl ExtField {
    /// Build the extension; `with_bar` requests the involution `x ↦ x^{√|E|}`
    /// on the absolute field (|E| must then be a square).
    pub fn new(base: &Field, f: &Poly, with_bar: bool) -> Result<ExtField> {
        if !f.is_irreducible() {
            return Err(Error::Unsupported("extension by reducible polynomial".into()));
        }
        let r = f.degree() as u32;
        let abs = if with_bar {
            let kk = base.k() * r;
            if kk % 2 != 0 {
                return Err(Error::Unsupported("bar on an odd-degree field".into()));
            }
            Field::with_bar(base.p(), kk / 2)?
        } else {
            Field::new(base.p(), base.k() * r)?
        };
        let base_emb = SubfieldEmbedding::new(base, &abs)?;
        // Lift f to abs and find its least root.
        let f_abs = Poly::new(&abs, f.coeffs().iter().map(|&c| base_emb.embed(c)).collect());
        let zeta = abs
            .elements()
            .find(|&x| f_abs.eval(x) == 0)
            .expect("irreducible polynomial splits in its degree extension");
        // Relative coordinate table: iterate all coordinate vectors.
        let mut rel = vec![vec![]; abs.q() as usize];
        let mut stack = vec![(0usize, abs.zero(), Vec::<Fel>::new())];
        while let Some((pos, acc, coords)) = stack.pop() {
            if pos == r as usize {
                rel[acc as usize] = coords;
                continue;
            }
            let zp = abs.pow(zeta, pos as u64);
            for c in base.elements() {
                let mut coords2 = coords.clone();
                coords2.push(c);
                let acc2 = abs.add(acc, abs.mul(base_emb.embed(c), zp));
                stack.push((pos + 1, acc2, coords2));
            }
        }
        Ok(ExtField {
            base: base.clone(),
            abs,
            f: f.clone(),
            zeta,
            base_emb,
            rel,
        })
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    /// Base element → abs element.
    pub fn embed_scalar(&self, a: Fel) -> Fel {
        self.base_emb.embed(a)
    }

    /// abs element → coordinates over the base in the basis `1, ζ, …, ζ^{r-1}`.
    pub fn coords(&self, a: Fel) -> &[Fel] {
        &self.rel[a as usize]
    }

    /// The canonical embedding of `GL(m, q^r)` into `GL(mr, q)`: each entry
    /// `φ(ζ)` becomes the block `φ(C)` for the companion matrix `C` of `f`.
    pub fn embed_matrix(&self, y: &MatrixFq) -> MatrixFq {
        assert_eq!(*y.field(), self.abs);
        let r = self.degree();
        let m = y.n();
        let c = MatrixFq::companion(&self.f);
        // powers of C
        let mut cpows = vec![MatrixFq::identity(&self.base, r)];
        for _ in 1..r {
            cpows.push(cpows.last().unwrap().mul(&c));
        }
        let mut out = MatrixFq::zero(&self.base, m * r);
        for i in 0..m {
            for j in 0..m {
                let coords = self.coords(y.get(i, j)).to_vec();
                let mut blk = MatrixFq::zero(&self.base, r);
                for (e, &cf) in coords.iter().enumerate() {
                    blk = blk.add(&cpows[e].scale(cf));
                }
                out.set_block(i * r, j * r, &blk);
            }
        }
        out
    }

    /// Inverse of `embed_matrix`; `None` when a block is not a polynomial in
    /// the companion matrix.
    pub fn unembed_matrix(&self, m: &MatrixFq) -> Option<MatrixFq> {
        assert_eq!(*m.field(), self.base);
        let r = self.degree();
        if m.n() % r != 0 {
            return None;
        }
        let mm = m.n() / r;
        let c = MatrixFq::companion(&self.f);
        let mut cpows = vec![MatrixFq::identity(&self.base, r)];
        for _ in 1..r {
            cpows.push(cpows.last().unwrap().mul(&c));
        }
        let mut out = MatrixFq::zero(&self.abs, mm);
        for i in 0..mm {
            for j in 0..mm {
                let blk = m.block(i * r, j * r, r);
                // In row convention e_0 C^e = e_e, so the first row of a
                // polynomial block lists its coefficients.
                let coeffs = blk.row(0);
                let mut rebuilt = MatrixFq::zero(&self.base, r);
                let mut val = self.abs.zero();
                for (e, &cf) in coeffs.iter().enumerate() {
                    rebuilt = rebuilt.add(&cpows[e].scale(cf));
                    val = self.abs.add(
                        val,
                        self.abs
                            .mul(self.embed_scalar(cf), self.abs.pow(self.zeta, e as u64)),
                    );
                }
                if rebuilt != blk {
                    return None;
                }
                out.set(i, j, val);
            }
        }
        Some(out)
    }
}
