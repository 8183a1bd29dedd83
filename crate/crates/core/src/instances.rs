//! Instance generators: small fixtures, hardness-reduction families and
//! seeded random instances.
//!
//! Random instances use `ChaCha8Rng::seed_from_u64(seed)` and draw integers
//! with `gen_range`, so a seed names the same instance on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degeneracy::degeneracy;
use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::rational::{int, ratio, Rational};

fn labels(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|k| format!("{prefix}{k}")).collect()
}

fn fig1(alice_house: Rational) -> (Instance, Allocation) {
    let inst = Instance::new(
        vec!["Alice".into(), "Bob".into()],
        vec!["farm".into(), "house".into(), "car".into()],
        vec![
            vec![int(4), alice_house, int(1)],
            vec![ratio(5, 4), int(2), int(5)],
        ],
    )
    .expect("fixture is well formed");
    let half = ratio(1, 2);
    let alloc = Allocation::new(vec![
        vec![int(1), half.clone(), int(0)],
        vec![int(0), half, int(1)],
    ])
    .expect("fixture allocation is valid");
    (inst, alloc)
}

/// Alice values farm, house, car at 4, 5/2, 1; Bob at 5/4, 2, 5. Alice gets
/// the farm, Bob the car, and they split the house.
pub fn fig1_left() -> (Instance, Allocation) {
    fig1(ratio(5, 2))
}

/// As [`fig1_left`] but Alice values the house at 25, which makes the same
/// allocation wasteful.
pub fn fig1_right() -> (Instance, Allocation) {
    fig1(int(25))
}

/// `n` agents and `n - 1` goods, every value 1.
pub fn identical_goods(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidInput("need at least 2 agents".into()));
    }
    Instance::from_values(vec![vec![int(1); n - 1]; n])
}

fn positive_row(a: &[u64]) -> Result<Vec<Rational>> {
    if a.is_empty() {
        return Err(Error::InvalidInput("empty number list".into()));
    }
    if a.contains(&0) {
        return Err(Error::InvalidInput("numbers must be positive".into()));
    }
    Ok(a.iter()
        .map(|&x| Rational::from_integer(x.into()))
        .collect())
}

/// Two agents with identical rows `a`: a zero-sharing envy-free allocation
/// exists iff `a` splits into two equal-sum halves.
pub fn gen_identical_partition(a: &[u64]) -> Result<Instance> {
    let row = positive_row(a)?;
    Instance::from_values(vec![row.clone(), row])
}

/// Two agents; the second row adds `b_o = o / (3m(o+1))` (objects numbered
/// from 1) to the first, which removes every ratio tie while keeping the
/// perturbation below 1/2 in total.
pub fn gen_perturbed_partition(a: &[u64]) -> Result<Instance> {
    let first = positive_row(a)?;
    let m = a.len() as i64;
    let mut total = Rational::from_integer(0.into());
    let second: Vec<Rational> = first
        .iter()
        .enumerate()
        .map(|(idx, x)| {
            let o = idx as i64 + 1;
            let b = ratio(o, 3 * m * (o + 1));
            total += &b;
            x + b
        })
        .collect();
    if total >= ratio(1, 2) {
        return Err(Error::Precondition(format!(
            "perturbation sum {total} is not below 1/2"
        )));
    }
    let inst = Instance::from_values(vec![first, second])?;
    let d = degeneracy(&inst);
    if d != 0 {
        return Err(Error::Precondition(format!(
            "perturbed instance has degeneracy {d}"
        )));
    }
    Ok(inst)
}

/// Two agents, `|a|` identical big goods plus `(m - |a|) / 2` pairs of small
/// goods `q_k, q̄_k` with `v1(q_k) = v2(q̄_k) = (k+1)/(4mk)` and
/// `v1(q̄_k) = v2(q_k) = 1/(4mk)`. Degeneracy is exactly `|a| - 1`.
pub fn gen_degeneracy_family(a: &[u64], m: usize) -> Result<Instance> {
    let big = positive_row(a)?;
    if m < a.len() || !(m - a.len()).is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "m - |a| must be a nonnegative even number (m = {m}, |a| = {})",
            a.len()
        )));
    }
    let mut first = big.clone();
    let mut second = big;
    let mm = m as i64;
    for k in 1..=((m - a.len()) / 2) as i64 {
        let heavy = ratio(k + 1, 4 * mm * k);
        let light = ratio(1, 4 * mm * k);
        first.extend([heavy.clone(), light.clone()]);
        second.extend([light, heavy]);
    }
    let small_total = |row: &[Rational]| row[a.len()..].iter().sum::<Rational>();
    debug_assert!(small_total(&first) < ratio(1, 2) && small_total(&second) < ratio(1, 2));
    let inst = Instance::from_values(vec![first, second])?;
    let d = degeneracy(&inst);
    if d != a.len() - 1 {
        return Err(Error::Precondition(format!(
            "degeneracy family has D = {d}, expected {}",
            a.len() - 1
        )));
    }
    Ok(inst)
}

/// `n` agents and `n(n-1)` goods; agent `i` values its own block of `n - 1`
/// goods at `n - 1/2` each and every other good at `(1/2)/(n-1)`. Every
/// consensus allocation must split all goods.
pub fn gen_consensus_tightness(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidInput("need at least 2 agents".into()));
    }
    let k = n as i64;
    let big = int(k) - ratio(1, 2);
    let small = ratio(1, 2 * (k - 1));
    let m = n * (n - 1);
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..m)
                .map(|o| {
                    if o / (n - 1) == i {
                        big.clone()
                    } else {
                        small.clone()
                    }
                })
                .collect()
        })
        .collect();
    let inst = Instance::new(labels("agent", n), labels("good", m), rows)?;
    debug_assert!((0..n).all(|i| inst.row_sum(i) == int(k * (k - 1))));
    Ok(inst)
}

/// Uniform integer valuations in `lo..=hi`, reproducible per seed.
pub fn gen_random(n: usize, m: usize, seed: u64, lo: i64, hi: i64) -> Result<Instance> {
    if lo > hi {
        return Err(Error::InvalidInput(format!(
            "empty value range {lo}..={hi}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| (0..m).map(|_| int(rng.gen_range(lo..=hi))).collect())
        .collect();
    Instance::from_values(rows)
}

/// A named fixture: `fig1_left`, `fig1_right` (both with their allocation) or
/// `identical_goods(n)` / `identical_goods:n`.
pub fn gen_fixture(name: &str) -> Result<(Instance, Option<Allocation>)> {
    match name {
        "fig1_left" => {
            let (inst, alloc) = fig1_left();
            Ok((inst, Some(alloc)))
        }
        "fig1_right" => {
            let (inst, alloc) = fig1_right();
            Ok((inst, Some(alloc)))
        }
        _ => {
            let arg = name
                .strip_prefix("identical_goods")
                .map(|rest| rest.trim_start_matches([':', '(']).trim_end_matches(')'))
                .ok_or_else(|| Error::InvalidInput(format!("unknown fixture {name:?}")))?;
            let n: usize = arg
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad agent count in {name:?}")))?;
            Ok((identical_goods(n)?, None))
        }
    }
}

/// True when the positive integers `a` split into two halves of equal sum.
pub fn has_equal_sum_partition(a: &[u64]) -> bool {
    let total: u64 = a.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let target = (total / 2) as usize;
    let mut reachable = vec![false; target + 1];
    reachable[0] = true;
    for &x in a {
        let x = x as usize;
        for s in (x..=target).rev() {
            reachable[s] |= reachable[s - x];
        }
    }
    reachable[target]
}
