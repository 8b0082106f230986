//! Squarefree kernels by trial division followed by Pollard-Brent rho.
//!
//! The kernel of a nonzero rational `r` is the unique squarefree positive
//! integer `s` with `s * |r|` a rational square. It equals the squarefree part
//! of `|numer * denom|`, so everything here works on non-negative integers.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;
pub const DEFAULT_RHO_ITERATIONS: u64 = 1 << 22;
pub const BUDGET_ENV: &str = "CUBOID_FACTOR_BUDGET";

/// Effort limits for [`squarefree_kernel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Primes up to this bound are removed by trial division.
    pub trial_bound: u64,
    /// Total rho iterations shared by every cofactor of one call.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iterations: DEFAULT_RHO_ITERATIONS,
        }
    }
}

impl FactorBudget {
    /// Default budget with `rho_iterations` taken from `CUBOID_FACTOR_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        let mut budget = FactorBudget::default();
        if let Ok(v) = std::env::var(BUDGET_ENV) {
            budget.rho_iterations = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{BUDGET_ENV}={v:?} is not an integer")))?;
        }
        Ok(budget)
    }
}

/// Squarefree kernel of a nonzero rational.
pub fn squarefree_kernel(r: &Rational, budget: &FactorBudget) -> Result<BigUint> {
    if r.is_zero() {
        return Err(Error::ZeroKernel);
    }
    let n = (r.numer() * r.denom()).magnitude().clone();
    squarefree_part(&n, budget)
}

/// Squarefree part of a positive integer.
pub fn squarefree_part(n: &BigUint, budget: &FactorBudget) -> Result<BigUint> {
    let factors = factorize(n, budget)?;
    Ok(factors
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .fold(BigUint::one(), |acc, (p, _)| acc * p))
}

/// Full prime factorization as a map prime -> exponent.
pub fn factorize(n: &BigUint, budget: &FactorBudget) -> Result<BTreeMap<BigUint, u32>> {
    if n.is_zero() {
        return Err(Error::ZeroKernel);
    }
    let mut out = BTreeMap::new();
    let mut m = n.clone();
    let primes = primes_up_to(budget.trial_bound);
    for &p in primes.iter() {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.insert(pb, e);
        }
    }
    if m.is_one() {
        return Ok(out);
    }
    let bound = BigUint::from(budget.trial_bound);
    if m <= &bound * &bound {
        // no factor up to sqrt(m) survived trial division
        *out.entry(m).or_insert(0) += 1;
        return Ok(out);
    }
    let mut remaining = budget.rho_iterations;
    split(m, 1, &mut remaining, &mut out)?;
    Ok(out)
}

fn split(n: BigUint, mult: u32, remaining: &mut u64, out: &mut BTreeMap<BigUint, u32>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_probable_prime(&n) {
        *out.entry(n).or_insert(0) += mult;
        return Ok(());
    }
    let s = n.sqrt();
    if &s * &s == n {
        return split(s, mult * 2, remaining, out);
    }
    let d = brent_rho(&n, remaining).ok_or_else(|| Error::FactorizationExceeded(n.to_string()))?;
    let q = &n / &d;
    split(d, mult, remaining, out)?;
    split(q, mult, remaining, out)
}

/// Finds a nontrivial factor of composite `n`, spending at most `*remaining` iterations.
fn brent_rho(n: &BigUint, remaining: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    const BATCH: u64 = 128;
    for c in 1u32.. {
        if *remaining == 0 {
            return None;
        }
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = BigUint::one();
        let mut q = BigUint::one();
        let mut r: u64 = 1;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = (q * abs_diff(&x, &y)) % n;
                }
                *remaining = remaining.saturating_sub(steps);
                g = q.gcd(n);
                k += steps;
                if *remaining == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            // batch overshot; backtrack one step at a time
            loop {
                ys = f(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a > b {
        a - b
    } else {
        b - a
    }
}

const MR_BASES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Miller-Rabin with fixed bases: deterministic below 3.3e24, probabilistic above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &b in MR_BASES.iter() {
        let bb = BigUint::from(b);
        if n == &bb {
            return true;
        }
        if (n % &bb).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for &b in MR_BASES.iter() {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn sieve(bound: u64) -> Vec<u64> {
    let bound = bound as usize;
    if bound < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; bound + 1];
    let mut primes = Vec::new();
    for i in 2..=bound {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= bound {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn primes_up_to(bound: u64) -> std::borrow::Cow<'static, [u64]> {
    static DEFAULT: OnceLock<Vec<u64>> = OnceLock::new();
    if bound == DEFAULT_TRIAL_BOUND {
        std::borrow::Cow::Borrowed(DEFAULT.get_or_init(|| sieve(DEFAULT_TRIAL_BOUND)))
    } else {
        std::borrow::Cow::Owned(sieve(bound))
    }
}

/// Common squarefree kernel of several rationals that are all `K * square` for one `K`.
///
/// Takes the kernel of the gcd of the integers `|numer * denom|`; since
/// `gcd(K u^2, K v^2) = K gcd(u, v)^2` this is far cheaper to factor than any
/// single input. Every input is then checked against the result.
pub fn common_squarefree_kernel(values: &[Rational], budget: &FactorBudget) -> Result<BigUint> {
    if values.is_empty() {
        return Err(Error::InconsistentKernel("no values".into()));
    }
    let mut g = BigInt::zero();
    for v in values {
        if v.is_zero() {
            return Err(Error::ZeroKernel);
        }
        g = g.gcd(&(v.numer() * v.denom()));
    }
    let k = squarefree_part(g.magnitude(), budget)?;
    let kr = Rational::from(k.clone());
    for v in values {
        if !(v.abs() * &kr).is_square() {
            return Err(Error::InconsistentKernel(format!(
                "{v} does not have squarefree kernel {k}"
            )));
        }
    }
    Ok(k)
}
