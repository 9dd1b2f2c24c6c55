//! Kronecker symbols and Dirichlet characters of small modulus.
//!
//! Character values are stored exactly: each unit maps to an index `k` in
//! `0..order`, standing for `exp(2 pi i k / order)`. Non-units map to zero.

use crate::error::{Error, Result};
use crate::modseries::ResidueRing;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest modulus [`char_group`] will build.
pub const CHAR_GROUP_BUDGET: u64 = 10_000;

/// The Kronecker symbol `(a/n)` for all integers `a`, `n`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return (a == 1 || a == -1) as i8;
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut sign = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    // factor out 2 from n
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && (a.rem_euclid(8) == 3 || a.rem_euclid(8) == 5) {
            sign = -sign;
        }
    }
    // Jacobi symbol (a/n) for odd positive n
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// An exact character value: zero or `exp(2 pi i index / order)` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CharValue {
    Zero,
    Root { order: u32, index: u32 },
}

impl CharValue {
    fn root(order: u32, index: u32) -> Self {
        let g = gcd(order as u64, index as u64).max(1) as u32;
        let (order, index) = (order / g, index / g);
        if index == 0 {
            CharValue::Root { order: 1, index: 0 }
        } else {
            CharValue::Root { order, index }
        }
    }

    /// The value as an integer when it is 0 or +-1.
    pub fn as_real(&self) -> Option<i8> {
        match *self {
            CharValue::Zero => Some(0),
            CharValue::Root { order: 1, .. } => Some(1),
            CharValue::Root { order: 2, .. } => Some(-1),
            CharValue::Root { .. } => None,
        }
    }
}

/// A Dirichlet character modulo `modulus`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirichletChar {
    modulus: u64,
    /// Every value index is taken modulo this order.
    order: u32,
    values: Vec<Option<u32>>,
    conductor: u64,
}

impl PartialEq for DirichletChar {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
            && (0..self.modulus).all(|n| self.value(n) == other.value(n))
    }
}

impl Eq for DirichletChar {}

impl DirichletChar {
    fn from_table(modulus: u64, order: u32, values: Vec<Option<u32>>) -> Self {
        let mut c = Self {
            modulus,
            order: order.max(1),
            values,
            conductor: modulus,
        };
        c.conductor = c.compute_conductor();
        c
    }

    /// The principal character modulo `modulus`.
    pub fn principal(modulus: u64) -> Self {
        let values = (0..modulus)
            .map(|n| (gcd(n, modulus) == 1).then_some(0))
            .collect();
        Self::from_table(modulus, 1, values)
    }

    pub fn trivial() -> Self {
        Self::principal(1)
    }

    /// `n -> (d/n)` as a character modulo `|d|` (for `d = 0, 1 mod 4`) or `4|d|`.
    pub fn kronecker(d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("(0/.) is not a character".into()));
        }
        let modulus = if d.rem_euclid(4) <= 1 {
            d.unsigned_abs()
        } else {
            4 * d.unsigned_abs()
        };
        let values = (0..modulus)
            .map(|n| match kronecker(d, n as i64) {
                0 => None,
                1 => Some(0),
                _ => Some(1),
            })
            .collect();
        Ok(Self::from_table(modulus, 2, values))
    }

    /// `chi_d(n) = (4d/n)`, the character attached to the U(d) and V(d) operators.
    pub fn chi_d(d: u64) -> Result<Self> {
        Self::kronecker(4 * d as i64)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn value(&self, n: u64) -> CharValue {
        match self.values[(n % self.modulus) as usize] {
            None => CharValue::Zero,
            Some(k) => CharValue::root(self.order, k),
        }
    }

    /// Value at a possibly negative argument.
    pub fn value_at(&self, n: i64) -> CharValue {
        self.value(n.rem_euclid(self.modulus as i64) as u64)
    }

    pub fn is_real(&self) -> bool {
        self.values
            .iter()
            .flatten()
            .all(|&k| (2 * k as u64).is_multiple_of(self.order as u64))
    }

    pub fn is_principal(&self) -> bool {
        self.values.iter().flatten().all(|&k| k == 0)
    }

    /// Value as an element of Z/mZ. Only defined for real characters.
    pub fn value_in(&self, n: u64, ring: ResidueRing) -> Option<u32> {
        self.value(n).as_real().map(|v| ring.from_i64(v as i64))
    }

    /// Pointwise product, as a character modulo the lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let modulus = lcm(self.modulus, other.modulus);
        let order = lcm(self.order as u64, other.order as u64) as u32;
        let (sa, sb) = (order / self.order, order / other.order);
        let values = (0..modulus)
            .map(|n| {
                let a = self.values[(n % self.modulus) as usize]?;
                let b = other.values[(n % other.modulus) as usize]?;
                Some((a * sa + b * sb) % order)
            })
            .collect();
        Self::from_table(modulus, order, values)
    }

    pub fn conj(&self) -> Self {
        let order = self.order;
        let values = self
            .values
            .iter()
            .map(|v| v.map(|k| (order - k) % order))
            .collect();
        Self::from_table(self.modulus, order, values)
    }

    /// Smallest `f | modulus` such that the character is trivial on units `= 1 (mod f)`.
    fn compute_conductor(&self) -> u64 {
        let m = self.modulus;
        for f in (1..=m).filter(|f| m.is_multiple_of(*f)) {
            let induced = (0..m)
                .filter(|&u| u % f == 1 % f && gcd(u, m) == 1)
                .all(|u| self.values[u as usize] == Some(0));
            if induced {
                return f;
            }
        }
        m
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        let f = self.conductor;
        let values = (0..f)
            .map(|r| {
                if gcd(r, f) != 1 {
                    return None;
                }
                // a lift of r that is a unit modulo the full modulus
                let lift = (0..self.modulus)
                    .map(|t| r + f * t)
                    .find(|&n| gcd(n, self.modulus) == 1)
                    .expect("units lift along reduction maps");
                self.values[(lift % self.modulus) as usize]
            })
            .collect();
        Self::from_table(f, self.order, values)
    }

    /// True when both induce the same primitive character.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.primitive() == other.primitive()
    }

    /// Short human-readable name, e.g. `trivial`, `(-4/.)`, or `mod 5 [0 1 3 2]`.
    pub fn name(&self) -> String {
        let p = self.primitive();
        if p.modulus == 1 {
            return "trivial".into();
        }
        if p.is_real() {
            let f = p.modulus as i64;
            for d in [f, -f] {
                if let Ok(k) = DirichletChar::kronecker(d) {
                    if k.modulus == p.modulus && k == p {
                        return format!("({d}/.)");
                    }
                }
            }
        }
        let idx: Vec<String> = (0..p.modulus)
            .map(|n| match p.value(n) {
                CharValue::Zero => "0".to_string(),
                CharValue::Root { order, index } => format!("{index}/{order}"),
            })
            .collect();
        format!("mod {} [{}]", p.modulus, idx.join(" "))
    }
}

impl fmt::Display for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Cyclic factors `(generator, order)` of `(Z/AZ)^x`, generators lifted by CRT.
fn unit_group_generators(a: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    for (p, e) in factorize(a) {
        let q = p.pow(e);
        let rest = a / q;
        let local: Vec<(u64, u64)> = if p == 2 {
            match e {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(q - 1, 2), (5, q / 4)],
            }
        } else {
            let g = primitive_root_prime_power(p, e);
            vec![(g, q - q / p)]
        };
        for (g, ord) in local {
            // x = g (mod q), x = 1 (mod rest)
            let lifted = if rest == 1 {
                g % q
            } else {
                let r = ResidueRing::new(q).unwrap();
                let inv = r.inv((rest % q) as u32).unwrap() as u64;
                let t = ((g + q - 1) % q) * inv % q;
                (1 + rest * t) % a
            };
            gens.push((lifted, ord));
        }
    }
    gens
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    let order = p - 1;
    let fs = factorize(order);
    let g = (2..p)
        .find(|&g| fs.iter().all(|&(f, _)| pow_mod(g, order / f, p) != 1))
        .unwrap_or(1);
    if e == 1 || pow_mod(g, p - 1, p * p) != 1 {
        g
    } else {
        g + p
    }
}

/// All `phi(A)` Dirichlet characters modulo `A`, principal first.
pub fn char_group(a: u64) -> Result<Vec<DirichletChar>> {
    if a == 0 {
        return Err(Error::Invalid("modulus must be positive".into()));
    }
    if a > CHAR_GROUP_BUDGET {
        return Err(Error::Budget(format!(
            "character groups are limited to modulus <= {CHAR_GROUP_BUDGET}"
        )));
    }
    let gens = unit_group_generators(a);
    let exponent = gens.iter().fold(1, |e, &(_, o)| lcm(e, o));
    // discrete logs: unit -> exponent vector
    let mut logs: Vec<Option<Vec<u64>>> = vec![None; a as usize];
    let mut exps = vec![0u64; gens.len()];
    loop {
        let unit = gens
            .iter()
            .zip(&exps)
            .fold(1 % a, |acc, (&(g, _), &k)| acc * pow_mod(g, k, a) % a);
        logs[unit as usize] = Some(exps.clone());
        if !advance(&mut exps, gens.iter().map(|&(_, o)| o)) {
            break;
        }
    }
    let mut out = Vec::new();
    let mut ks = vec![0u64; gens.len()];
    loop {
        let values = logs
            .iter()
            .map(|log| {
                log.as_ref().map(|ev| {
                    let idx = ev
                        .iter()
                        .zip(&ks)
                        .zip(&gens)
                        .map(|((&e, &k), &(_, o))| e * k % o * (exponent / o))
                        .sum::<u64>();
                    (idx % exponent) as u32
                })
            })
            .collect();
        out.push(DirichletChar::from_table(a, exponent as u32, values));
        if !advance(&mut ks, gens.iter().map(|&(_, o)| o)) {
            break;
        }
    }
    Ok(out)
}

/// Odometer increment over mixed radices; false once it wraps to zero.
fn advance(digits: &mut [u64], radices: impl Iterator<Item = u64>) -> bool {
    for (d, r) in digits.iter_mut().zip(radices) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// The monic integer polynomial `Phi_n`, lowest degree first.
fn cyclotomic(n: usize) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = poly_div_exact(&num, &cyclotomic(d));
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    q
}

/// Reduces `sum counts[j] x^j` modulo `Phi_order`, returning the remainder.
fn reduce_cyclotomic(counts: &[i64], order: usize) -> Vec<i64> {
    let phi = cyclotomic(order);
    let deg = phi.len() - 1;
    let mut rem = counts.to_vec();
    for i in (deg..rem.len()).rev() {
        let c = rem[i];
        if c != 0 {
            for (j, &b) in phi.iter().enumerate() {
                rem[i - deg + j] -= c * b;
            }
        }
    }
    rem.truncate(deg.max(1));
    rem
}

/// `(1/phi(A)) * sum over psi mod A of conj(psi)(B) psi(n)`, evaluated exactly
/// in the cyclotomic field.
pub fn orthogonality_sum(a: u64, b: u64, n: u64) -> Result<Ratio<i64>> {
    if gcd(b, a) != 1 {
        return Err(Error::NotCoprime { a: b, b: a });
    }
    let group = char_group(a)?;
    let order = group[0].order as usize;
    let mut counts = vec![0i64; order];
    for psi in &group {
        let (Some(kb), Some(kn)) = (psi.values[(b % a) as usize], psi.values[(n % a) as usize])
        else {
            continue;
        };
        let idx = (kn as usize + order - kb as usize) % order;
        counts[idx] += 1;
    }
    let rem = reduce_cyclotomic(&counts, order);
    if rem.iter().skip(1).any(|&c| c != 0) {
        return Err(Error::Invalid(format!(
            "character sum is not rational: {rem:?}"
        )));
    }
    Ok(Ratio::new(rem[0], group.len() as i64))
}
