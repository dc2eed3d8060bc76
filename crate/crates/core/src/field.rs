//! Exact arithmetic in small finite fields `F_q` with `q = p^k`.
//!
//! Elements are stored as integers in `[0, q)`: the base-`p` little-endian
//! encoding of the coefficient vector of the element with respect to the
//! power basis of a fixed irreducible modulus. The modulus for each `(p, k)`
//! is the monic irreducible polynomial of degree `k` over `F_p` whose
//! non-leading coefficient vector has the least integer encoding, so element
//! encodings are deterministic and serializable without external tables.
//!
//! A field may carry the *bar* involution `x ↦ x^q₀` (with `q = q₀²`), in
//! which case it plays the role of `F_{q²}` for unitary groups and hermitian
//! forms; `bar` fixes exactly the subfield of order `q₀`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// An encoded field element: an integer in `[0, q)`.
pub type Fel = u64;

#[derive(Debug)]
struct FieldInner {
    p: u64,
    k: u32,
    q: u64,
    /// Monic irreducible modulus over `F_p`, little-endian, length `k + 1`.
    modulus: Vec<u64>,
    /// `exp[i] = g^i` for the least primitive element `g`, `i ∈ [0, q-1)`.
    exp: Vec<Fel>,
    /// `log[a]` for `a ∈ [1, q)`; `log[0]` is unused.
    log: Vec<u32>,
    /// Full addition table when `q` is small enough to afford it.
    add_table: Option<Vec<Fel>>,
    /// `Some(q₀)` when the field carries the involution `x ↦ x^q₀`.
    bar_exp: Option<u64>,
}

/// A finite field `F_{p^k}`; cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.has_bar() {
            write!(f, "F_{}(bar)", self.q())
        } else {
            write!(f, "F_{}", self.q())
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k && self.0.bar_exp == other.0.bar_exp
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.k, self.0.bar_exp).hash(state);
    }
}

/// Polynomial arithmetic over `F_p` on raw coefficient vectors (little-endian,
/// no trailing zeros), used only while constructing field tables.
mod ppoly {
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo monic `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for (j, &c) in m.iter().enumerate() {
                let idx = shift + j;
                let sub = (lead * c) % p;
                r[idx] = (r[idx] + p - sub) % p;
            }
            trim(&mut r);
            if r.len() > dm && *r.last().unwrap() == 0 {
                trim(&mut r);
            }
        }
        r
    }

    /// Does any monic polynomial of degree in `1..=max_deg` divide `f`?
    pub fn has_small_factor(f: &[u64], p: u64, max_deg: usize) -> bool {
        for d in 1..=max_deg {
            let count = p.pow(d as u32);
            for enc in 0..count {
                let mut cand = decode(enc, p, d);
                cand.push(1); // monic of degree d
                if rem(f, &cand, p).is_empty() {
                    return true;
                }
            }
        }
        false
    }

    pub fn decode(mut enc: u64, p: u64, len: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(enc % p);
            enc /= p;
        }
        out
    }
}

/// Cache of constructed fields keyed by `(p, k, has_bar)`.
fn registry() -> &'static Mutex<HashMap<(u64, u32, bool), Field>> {
    static REG: OnceLock<Mutex<HashMap<(u64, u32, bool), Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// The field `F_{p^k}` without the bar involution.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        Field::build(p, k, false)
    }

    /// The field `F_{q₀²}` (with `q₀ = p^k`) carrying `bar = x ↦ x^{q₀}`.
    pub fn with_bar(p: u64, half_k: u32) -> Result<Field> {
        Field::build(p, 2 * half_k, true)
    }

    fn build(p: u64, k: u32, bar: bool) -> Result<Field> {
        if !is_prime(p) || k == 0 {
            return Err(Error::InvalidField { p, k });
        }
        if let Some(f) = registry().lock().unwrap().get(&(p, k, bar)) {
            return Ok(f.clone());
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= 1 << 24)
            .ok_or(Error::InvalidField { p, k })?;

        // Least irreducible monic modulus of degree k over F_p.
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            let mut found = None;
            for enc in 0..q {
                let mut cand = ppoly::decode(enc, p, k as usize);
                cand.push(1);
                if cand[0] != 0 && !ppoly::has_small_factor(&cand, p, (k / 2) as usize) {
                    found = Some(cand);
                    break;
                }
            }
            found.ok_or(Error::InvalidField { p, k })?
        };

        // Least primitive element, then exp/log tables.
        let order_factors = prime_factors(q - 1);
        let mut exp = vec![0u64; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut found_gen = false;
        'cand: for g in 2..q.max(3) {
            if q == 2 {
                // F_2: the unit group is trivial; 1 is the generator.
            }
            let g = if q == 2 { 1 } else { g };
            let gp = ppoly::decode(g, p, k as usize);
            // Check multiplicative order is exactly q - 1.
            for &r in &order_factors {
                if q > 2 && pow_raw(&gp, (q - 1) / r, &modulus, p) == vec![1] {
                    continue 'cand;
                }
            }
            let mut acc = vec![1u64];
            for i in 0..(q - 1) as usize {
                let enc = encode_raw(&acc, p);
                exp[i] = enc;
                log[enc as usize] = i as u32;
                acc = ppoly::rem(&ppoly::mul(&acc, &gp, p), &modulus, p);
            }
            found_gen = true;
            break;
        }
        debug_assert!(found_gen);

        let add_table = if q <= 512 {
            let mut t = vec![0u64; (q * q) as usize];
            for a in 0..q {
                let da = ppoly::decode(a, p, k as usize);
                for b in 0..q {
                    let db = ppoly::decode(b, p, k as usize);
                    let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = encode_raw(&s, p);
                }
            }
            Some(t)
        } else {
            None
        };

        let field = Field(Arc::new(FieldInner {
            p,
            k,
            q,
            modulus,
            exp,
            log,
            add_table,
            bar_exp: if bar { Some(p.pow(k / 2)) } else { None },
        }));
        registry()
            .lock()
            .unwrap()
            .insert((p, k, bar), field.clone());
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn q(&self) -> u64 {
        self.0.q
    }
    /// The modulus polynomial over `F_p` (little-endian coefficients).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    pub fn has_bar(&self) -> bool {
        self.0.bar_exp.is_some()
    }
    /// For a bar field `F_{q₀²}`, the subfield size `q₀`.
    pub fn bar_fixed_order(&self) -> Option<u64> {
        self.0.bar_exp
    }

    pub fn zero(&self) -> Fel {
        0
    }
    pub fn one(&self) -> Fel {
        1
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fel> {
        0..self.0.q
    }

    /// The least primitive element `ω` of the multiplicative group.
    pub fn primitive(&self) -> Fel {
        if self.0.q == 2 {
            1
        } else {
            self.0.exp[1]
        }
    }

    pub fn add(&self, a: Fel, b: Fel) -> Fel {
        debug_assert!(a < self.0.q && b < self.0.q);
        if let Some(t) = &self.0.add_table {
            return t[(a * self.0.q + b) as usize];
        }
        let (p, q) = (self.0.p, self.0.q);
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        while place < q {
            out += ((a + b) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: Fel) -> Fel {
        let (p, q) = (self.0.p, self.0.q);
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        while place < q {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: Fel, b: Fel) -> Fel {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fel, b: Fel) -> Fel {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.q - 1;
        let i = (self.0.log[a as usize] as u64 + self.0.log[b as usize] as u64) % n;
        self.0.exp[i as usize]
    }

    pub fn inv(&self, a: Fel) -> Result<Fel> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.0.q - 1;
        let i = (n - self.0.log[a as usize] as u64) % n;
        Ok(self.0.exp[i as usize])
    }

    pub fn div(&self, a: Fel, b: Fel) -> Result<Fel> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for a non-negative exponent.
    pub fn pow(&self, a: Fel, e: u64) -> Fel {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.0.q - 1;
        let i = (self.0.log[a as usize] as u128 * e as u128 % n as u128) as u64;
        self.0.exp[i as usize]
    }

    /// The multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fel) -> u64 {
        assert!(a != 0);
        let n = self.0.q - 1;
        let l = self.0.log[a as usize] as u64;
        n / gcd(n, l.max(if l == 0 { n } else { l }))
    }

    /// The bar involution `x ↦ x^{q₀}`; identity on fields without bar.
    pub fn bar(&self, a: Fel) -> Fel {
        match self.0.bar_exp {
            None => a,
            Some(q0) => self.pow(a, q0),
        }
    }

    /// Norm onto the bar-fixed subfield: `a · bar(a)`.
    pub fn norm(&self, a: Fel) -> Fel {
        self.mul(a, self.bar(a))
    }

    /// Trace onto the bar-fixed subfield: `a + bar(a)`.
    pub fn trace(&self, a: Fel) -> Fel {
        self.add(a, self.bar(a))
    }

    /// Is `a` fixed by bar (i.e. in the subfield `F_{q₀}`)?
    pub fn is_bar_fixed(&self, a: Fel) -> bool {
        self.bar(a) == a
    }

    /// Solve `α·bar(α) = c` on a bar field; `c` must be nonzero and bar-fixed.
    ///
    /// Returns the solution with least discrete logarithm, for determinism.
    pub fn solve_norm_equation(&self, c: Fel) -> Result<Fel> {
        if c == 0 {
            return Err(Error::DegenerateTarget);
        }
        let q0 = self.0.bar_exp.ok_or(Error::NoBar)?;
        if !self.is_bar_fixed(c) {
            return Err(Error::DegenerateTarget);
        }
        // log c = (q₀ + 1)·log α (mod q² − 1); c ∈ F_{q₀}* means (q₀+1) | log c
        // relative to the group structure, so the least solution is direct.
        let n = self.0.q - 1;
        let lc = self.0.log[c as usize] as u64;
        let m = q0 + 1;
        let g = gcd(m, n);
        if lc % g != 0 {
            return Err(Error::DegenerateTarget);
        }
        // Solve m·x ≡ lc (mod n): x = (lc/g)·inv(m/g) mod (n/g).
        let n_g = n / g;
        let x = (lc / g) % n_g * mod_inverse(m / g % n_g, n_g) % n_g;
        let alpha = self.0.exp[(x % n) as usize];
        debug_assert_eq!(self.norm(alpha), c);
        Ok(alpha)
    }

    /// Is `a` a square in `F_q*`? (Zero counts as square.)
    pub fn is_square(&self, a: Fel) -> bool {
        if a == 0 || self.0.p == 2 {
            return true;
        }
        self.0.log[a as usize] as u64 % 2 == 0
    }

    /// The least non-square element (q odd).
    pub fn least_nonsquare(&self) -> Fel {
        assert!(self.0.p != 2);
        self.elements()
            .find(|&a| a != 0 && !self.is_square(a))
            .unwrap()
    }

    /// Encode a base-p little-endian digit vector.
    pub fn encode_digits(&self, digits: &[u64]) -> Fel {
        encode_raw(digits, self.0.p)
    }

    /// Decode into `k` base-p digits.
    pub fn decode_digits(&self, a: Fel) -> Vec<u64> {
        ppoly::decode(a, self.0.p, self.0.k as usize)
    }
}

fn encode_raw(coeffs: &[u64], p: u64) -> u64 {
    let mut out = 0u64;
    for &c in coeffs.iter().rev() {
        out = out * p + c;
    }
    out
}

fn pow_raw(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    ppoly::trim(&mut b);
    while e > 0 {
        if e & 1 == 1 {
            acc = ppoly::rem(&ppoly::mul(&acc, &b, p), modulus, p);
        }
        b = ppoly::rem(&ppoly::mul(&b, &b, p), modulus, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m as i64, (a % m) as i64);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    assert_eq!(r, 1, "element not invertible");
    t.rem_euclid(m as i64) as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An embedding of a subfield into an extension field with the same
/// characteristic, determined by the least root of the subfield's modulus.
#[derive(Debug, Clone)]
pub struct SubfieldEmbedding {
    pub small: Field,
    pub big: Field,
    forward: Vec<Fel>,
    backward: HashMap<Fel, Fel>,
}

impl SubfieldEmbedding {
    pub fn new(small: &Field, big: &Field) -> Result<SubfieldEmbedding> {
        if small.p() != big.p() || big.k() % small.k() != 0 {
            return Err(Error::InvalidField {
                p: small.p(),
                k: small.k(),
            });
        }
        // Least root of the subfield modulus in the big field.
        let p = small.p();
        let root = big
            .elements()
            .find(|&x| eval_in(big, small.modulus(), x, p) == 0)
            .expect("subfield modulus splits in the extension field");
        let mut forward = Vec::with_capacity(small.q() as usize);
        for a in small.elements() {
            let digits = small.decode_digits(a);
            let mut acc = 0;
            let mut pw = big.one();
            for &d in &digits {
                // digit d in F_p maps to d·1 in the big field
                let mut dval = 0;
                for _ in 0..d {
                    dval = big.add(dval, 1);
                }
                acc = big.add(acc, big.mul(dval, pw));
                pw = big.mul(pw, root);
            }
            forward.push(acc);
        }
        let backward = forward
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as Fel))
            .collect();
        Ok(SubfieldEmbedding {
            small: small.clone(),
            big: big.clone(),
            forward,
            backward,
        })
    }

    pub fn embed(&self, a: Fel) -> Fel {
        self.forward[a as usize]
    }

    /// Inverse of `embed`; `None` when the element is outside the image.
    pub fn retract(&self, a: Fel) -> Option<Fel> {
        self.backward.get(&a).copied()
    }
}

fn eval_in(field: &Field, poly_over_fp: &[u64], x: Fel, p: u64) -> Fel {
    let mut acc = 0;
    for &c in poly_over_fp.iter().rev() {
        acc = field.mul(acc, x);
        let mut cval = 0;
        for _ in 0..(c % p) {
            cval = field.add(cval, 1);
        }
        acc = field.add(acc, cval);
    }
    acc
}
