//! Integer polynomials in one variable `t` and in the bigraded pair `(s, t)`.
//!
//! A bigraded series `P(s,t) = Σ dim^{p,q} s^q t^p` records cohomology ranks:
//! `t` tracks the cohomological degree `p`, `s` the exterior weight `q`.

use std::collections::BTreeMap;
use std::fmt;

/// Dense univariate polynomial with integer coefficients, ascending powers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly(Vec<i64>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn one() -> Self {
        UniPoly(vec![1])
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        let mut p = UniPoly(coeffs);
        p.trim();
        p
    }

    /// `c · t^a`
    pub fn monomial(c: i64, a: usize) -> Self {
        let mut coeffs = vec![0; a + 1];
        coeffs[a] = c;
        UniPoly::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn eval_at_one(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.0.len().max(other.0.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![0i64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// Quotient and remainder by a divisor whose leading coefficient is ±1.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead = *divisor.0.last().unwrap();
        assert!(lead == 1 || lead == -1, "divrem requires a unit leading coefficient");
        let mut rem = self.0.clone();
        let mut quot = vec![0i64; self.0.len().saturating_sub(d)];
        while rem.len() > d || (rem.len() == d + 1 && d == 0) {
            let k = rem.len() - 1;
            let c = rem[k] / lead;
            if rem.len() < d + 1 {
                break;
            }
            let shift = k - d;
            if c != 0 {
                quot[shift] = c;
                for (i, b) in divisor.0.iter().enumerate() {
                    rem[shift + i] -= c * b;
                }
            }
            rem.pop();
            if rem.is_empty() {
                break;
            }
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    pub fn divides(&self, dividend: &UniPoly) -> bool {
        if dividend.is_zero() {
            return true;
        }
        let (_, r) = dividend.divrem(self);
        r.is_zero()
    }

    /// Greedy factorization into `(1 + c·t^a)` pieces for display; returns the
    /// extracted factors (ascending) and the unfactored remainder.
    pub fn display_factors(&self) -> (Vec<(i64, usize)>, UniPoly) {
        let mut rest = self.clone();
        let mut factors = Vec::new();
        if rest.is_zero() || rest.coeff(0) == 0 {
            return (factors, rest);
        }
        let mut progress = true;
        while progress && rest.degree().unwrap_or(0) > 0 {
            progress = false;
            let maxdeg = rest.degree().unwrap();
            'search: for a in 1..=maxdeg {
                for c in 1..=rest.0.iter().map(|x| x.abs()).max().unwrap_or(1) {
                    let cand = UniPoly::from_coeffs({
                        let mut v = vec![0; a + 1];
                        v[0] = 1;
                        v[a] = c;
                        v
                    });
                    if cand.divides(&rest) {
                        rest = rest.divrem(&cand).0;
                        factors.push((c, a));
                        progress = true;
                        break 'search;
                    }
                }
            }
        }
        factors.sort();
        (factors, rest)
    }

    pub fn render(&self, var: &str, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.0.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let mag = c.abs();
            let first = out.is_empty();
            if *c < 0 {
                out.push('-');
            } else if !first {
                out.push('+');
            }
            let var_part = power(var, k, latex);
            if var_part.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if mag != 1 {
                    out.push_str(&mag.to_string());
                }
                out.push_str(&var_part);
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t", false))
    }
}

fn power(var: &str, k: usize, latex: bool) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ if latex => format!("{var}^{{{k}}}"),
        _ => format!("{var}^{k}"),
    }
}

/// `Σ c_{p,q} s^q t^p` with integer coefficients, keyed by `(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BigradedPoly {
    terms: BTreeMap<(usize, usize), i64>,
}

impl BigradedPoly {
    pub fn zero() -> Self {
        BigradedPoly::default()
    }

    pub fn one() -> Self {
        BigradedPoly::monomial(1, 0, 0)
    }

    /// `c · s^q · t^p`
    pub fn monomial(c: i64, q: usize, p: usize) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((p, q), c);
        }
        BigradedPoly { terms }
    }

    pub fn set(&mut self, p: usize, q: usize, c: i64) {
        if c == 0 {
            self.terms.remove(&(p, q));
        } else {
            self.terms.insert((p, q), c);
        }
    }

    pub fn coeff(&self, p: usize, q: usize) -> i64 {
        self.terms.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &BigradedPoly) -> BigradedPoly {
        let mut out = self.clone();
        for ((p, q), c) in other.terms() {
            let v = out.coeff(p, q) + c;
            out.set(p, q, v);
        }
        out
    }

    pub fn mul(&self, other: &BigradedPoly) -> BigradedPoly {
        let mut out = BigradedPoly::zero();
        for ((p1, q1), c1) in self.terms() {
            for ((p2, q2), c2) in other.terms() {
                let v = out.coeff(p1 + p2, q1 + q2) + c1 * c2;
                out.set(p1 + p2, q1 + q2, v);
            }
        }
        out
    }

    /// `(1 + c s^qs t^pt)` convenience factor.
    pub fn one_plus(c: i64, qs: usize, pt: usize) -> BigradedPoly {
        BigradedPoly::one().add(&BigradedPoly::monomial(c, qs, pt))
    }

    pub fn from_unipoly_in_t(p: &UniPoly) -> BigradedPoly {
        let mut out = BigradedPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            out.set(k, 0, *c);
        }
        out
    }

    /// Sets `s = 1`, leaving a polynomial in `t`.
    pub fn specialize_s_one(&self) -> UniPoly {
        let maxp = self.terms.keys().map(|(p, _)| *p).max().unwrap_or(0);
        let mut coeffs = vec![0i64; maxp + 1];
        for ((p, _), c) in self.terms() {
            coeffs[p] += c;
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// Coefficient of `s^q` as a polynomial in `t`.
    pub fn s_slice(&self, q: usize) -> UniPoly {
        let maxp = self.terms.keys().map(|(p, _)| *p).max().unwrap_or(0);
        let mut coeffs = vec![0i64; maxp + 1];
        for ((p, qq), c) in self.terms() {
            if qq == q {
                coeffs[p] += c;
            }
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn max_s_degree(&self) -> usize {
        self.terms.keys().map(|(_, q)| *q).max().unwrap_or(0)
    }

    /// Grouped text form, ascending in `t`, e.g. `1+6t+(12+2s)t^2`.
    pub fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let maxp = self.terms.keys().map(|(p, _)| *p).max().unwrap();
        let mut out = String::new();
        for p in 0..=maxp {
            let mut s_terms: Vec<(usize, i64)> =
                self.terms.range((p, 0)..=(p, usize::MAX)).map(|((_, q), c)| (*q, *c)).collect();
            s_terms.retain(|(_, c)| *c != 0);
            if s_terms.is_empty() {
                continue;
            }
            let t_part = power("t", p, latex);
            let inner = render_s_poly(&s_terms, latex);
            let needs_parens = s_terms.len() > 1 && !t_part.is_empty();
            let piece = if t_part.is_empty() {
                inner.clone()
            } else if needs_parens {
                format!("({inner}){t_part}")
            } else {
                // Single term: inline the coefficient/monomial.
                let (q, c) = s_terms[0];
                let mut piece = String::new();
                if c < 0 {
                    piece.push('-');
                }
                let mag = c.abs();
                let s_part = power("s", q, latex);
                if mag != 1 || s_part.is_empty() && false {
                    piece.push_str(&mag.to_string());
                } else if mag != 1 {
                    piece.push_str(&mag.to_string());
                }
                piece.push_str(&s_part);
                piece.push_str(&t_part);
                piece
            };
            if !out.is_empty() && !piece.starts_with('-') {
                out.push('+');
            }
            out.push_str(&piece);
        }
        out
    }

    /// LaTeX form; renders as a product of `s`-degree-≤1 factors when the
    /// series factors that way over the integers, otherwise expanded.
    pub fn render_latex_factored(&self) -> String {
        match self.display_factorization() {
            Some(f) if !f.trivial() => f.render_latex(),
            _ => self.render(true),
        }
    }

    /// Attempts `P = G(t) · Π (1 + c_i s t^{a_i})` with integer `c_i > 0`.
    pub fn display_factorization(&self) -> Option<DisplayFactorization> {
        if self.is_zero() {
            return None;
        }
        // Content: gcd over the s-slices, computed in ℚ[t] and normalized to
        // a primitive integer polynomial with positive constant term.
        let slices: Vec<UniPoly> =
            (0..=self.max_s_degree()).map(|q| self.s_slice(q)).collect();
        let content = slices.iter().filter(|u| !u.is_zero()).fold(UniPoly::zero(), gcd_unipoly);
        if content.is_zero() || content.coeff(0) == 0 {
            return None;
        }
        let mut reduced: Vec<UniPoly> = Vec::new();
        for s in &slices {
            if !content.divides(s) {
                return None;
            }
            reduced.push(s.divrem(&content).0);
        }
        // Greedily split off (1 + c s t^a) factors.
        let mut linear: Vec<(i64, usize)> = Vec::new();
        loop {
            while reduced.last().is_some_and(UniPoly::is_zero) {
                reduced.pop();
            }
            if reduced.len() <= 1 {
                break;
            }
            let mut found = false;
            let candidates: Vec<(i64, usize)> = {
                // c·t^a must divide the top s-slice (it is the product of all
                // the c_i t^{a_i}); enumerate from the s^1 slice instead,
                // which is a sum of the candidates times units.
                let probe = &reduced[1];
                (0..probe.coeffs().len())
                    .filter(|a| probe.coeff(*a) != 0)
                    .flat_map(|a| (1..=probe.coeff(a).abs()).map(move |c| (c, a)))
                    .collect()
            };
            for (c, a) in candidates {
                if let Some(q) = divide_linear_s_factor(&reduced, c, a) {
                    reduced = q;
                    linear.push((c, a));
                    found = true;
                    break;
                }
            }
            if !found {
                return None;
            }
        }
        if reduced.len() != 1 || reduced[0] != UniPoly::one() {
            return None;
        }
        linear.sort_by_key(|(c, a)| (*a, *c));
        let (content_factors, content_rest) = content.display_factors();
        Some(DisplayFactorization { content_factors, content_rest, linear })
    }
}

/// Exact division of `Σ R_q(t) s^q` by `(1 + c t^a s)`.
fn divide_linear_s_factor(slices: &[UniPoly], c: i64, a: usize) -> Option<Vec<UniPoly>> {
    let factor = UniPoly::monomial(c, a);
    let mut q: Vec<UniPoly> = Vec::with_capacity(slices.len());
    for (k, r) in slices.iter().enumerate() {
        let prev = if k == 0 { UniPoly::zero() } else { factor.mul(&q[k - 1]) };
        let diff = r.add(&prev.mul(&UniPoly::from_coeffs(vec![-1])));
        q.push(diff);
    }
    match q.pop() {
        Some(last) if last.is_zero() => Some(q),
        _ => None,
    }
}

/// Monic-free gcd in ℚ[t], returned as a primitive integer polynomial with a
/// positive leading sign convention on the constant term when possible.
fn gcd_unipoly(a: UniPoly, b: &UniPoly) -> UniPoly {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};
    type Q = BigRational;
    fn to_q(p: &UniPoly) -> Vec<Q> {
        p.coeffs().iter().map(|c| Q::from_integer(BigInt::from(*c))).collect()
    }
    fn trim(v: &mut Vec<Q>) {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
    }
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a;
    }
    let (mut x, mut y) = (to_q(&a), to_q(b));
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        // x mod y
        while x.len() >= y.len() {
            let c = x.last().unwrap() / y.last().unwrap();
            let shift = x.len() - y.len();
            for (i, b) in y.iter().enumerate() {
                let v = &x[shift + i] - &c * b;
                x[shift + i] = v;
            }
            x.pop();
            trim(&mut x);
            if x.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    // Normalize: clear denominators, divide by integer content, fix sign.
    let lcm = x.iter().fold(BigInt::one(), |acc, q| {
        let d = q.denom();
        &acc * d / num_integer_gcd(&acc, d)
    });
    let mut ints: Vec<BigInt> = x.iter().map(|q| (q * &lcm).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, v| num_integer_gcd(&acc, v));
    if !content.is_zero() {
        for v in &mut ints {
            *v = &*v / &content;
        }
    }
    let lowest = ints.iter().find(|v| !v.is_zero());
    if lowest.is_some_and(Signed::is_negative) {
        for v in &mut ints {
            *v = -&*v;
        }
    }
    UniPoly::from_coeffs(ints.iter().map(|v| i64::try_from(v).expect("gcd coefficient overflow")).collect())
}

fn num_integer_gcd(a: &num_bigint::BigInt, b: &num_bigint::BigInt) -> num_bigint::BigInt {
    use num_traits::Zero;
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a.sign() == num_bigint::Sign::Minus {
        -a
    } else {
        a
    }
}

fn render_s_poly(s_terms: &[(usize, i64)], latex: bool) -> String {
    let mut out = String::new();
    for (q, c) in s_terms {
        let first = out.is_empty();
        if *c < 0 {
            out.push('-');
        } else if !first {
            out.push('+');
        }
        let mag = c.abs();
        let s_part = power("s", *q, latex);
        if s_part.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if mag != 1 {
                out.push_str(&mag.to_string());
            }
            out.push_str(&s_part);
        }
    }
    out
}

/// `P = content · Π (1 + c s t^a)` shape for pretty printing.
#[derive(Debug, Clone)]
pub struct DisplayFactorization {
    /// `(c, a)` pieces of the s-free content of the form `(1 + c t^a)`.
    pub content_factors: Vec<(i64, usize)>,
    /// Unfactored s-free remainder (may be `1`).
    pub content_rest: UniPoly,
    /// `(c, a)` pieces `(1 + c s t^a)`.
    pub linear: Vec<(i64, usize)>,
}

impl DisplayFactorization {
    pub fn trivial(&self) -> bool {
        self.linear.is_empty() && self.content_factors.is_empty()
    }

    pub fn render_latex(&self) -> String {
        let mut pieces: Vec<String> = Vec::new();
        // Group repeated content factors into powers.
        let mut k = 0;
        while k < self.content_factors.len() {
            let (c, a) = self.content_factors[k];
            let mut mult = 1;
            while k + mult < self.content_factors.len() && self.content_factors[k + mult] == (c, a) {
                mult += 1;
            }
            let base = format!("(1+{})", UniPoly::monomial(c, a).render("t", true));
            pieces.push(if mult > 1 { format!("{base}^{{{mult}}}") } else { base });
            k += mult;
        }
        if self.content_rest != UniPoly::one() {
            pieces.push(format!("({})", self.content_rest.render("t", true)));
        }
        for (c, a) in &self.linear {
            let coeff = if *c == 1 { String::new() } else { c.to_string() };
            pieces.push(format!("(1+{coeff}s{})", power("t", *a, true)));
        }
        if pieces.is_empty() {
            "1".to_string()
        } else {
            pieces.join("")
        }
    }
}
