//! Values checked against oracles written from scratch here: a recursive
//! partition generator with integer class sizes, a dynamic program over part
//! sizes, the cycle-length recurrence for short cycles, Euler's pentagonal
//! recurrence for partition counts, and exhaustive enumeration of `S_n`.

use kappa_lab::brute::{brute_force_table, BRUTE_FORCE_LIMIT};
use kappa_lab::stats::{s_below_series, ENUMERATION_LIMIT};
use kappa_lab::{partitions, Engine, ExactQ, Method, Quantity};
use rug::ops::Pow;
use rug::Integer;

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// All partitions of `n` into parts `≤ max`, largest part first.
fn own_partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=n.min(max)).rev() {
        prefix.push(part);
        own_partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

fn all_partitions(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    own_partitions(n, n, &mut Vec::new(), &mut out);
    out
}

/// `∏ d^{m_d} m_d!`
fn z(parts: &[u32]) -> Integer {
    let mut z = Integer::from(1);
    let mut i = 0;
    while i < parts.len() {
        let d = parts[i];
        let m = parts[i..].iter().take_while(|&&p| p == d).count() as u32;
        z *= Integer::from(d).pow(m) * factorial(m);
        i += m as usize;
    }
    z
}

struct ClassOracle {
    kappa: ExactQ,
    kappa_even: ExactQ,
    kappa_odd: ExactQ,
    q: ExactQ,
    alt_direct: ExactQ,
}

/// Sums of squared class sizes over every partition of `n ≥ 2`.
fn class_oracle(n: u32) -> ClassOracle {
    let fact = factorial(n);
    let half = Integer::from(&fact / 2u32);
    let (mut all, mut even, mut odd, mut split, mut alt) =
        (Integer::new(), Integer::new(), Integer::new(), Integer::new(), Integer::new());
    for parts in all_partitions(n) {
        let size = Integer::from(&fact / z(&parts));
        let sq = Integer::from(&size * &size);
        all += &sq;
        let is_even = parts.iter().filter(|&&p| p % 2 == 0).count() % 2 == 0;
        let distinct_odd = parts.iter().all(|p| p % 2 == 1) && parts.windows(2).all(|w| w[0] != w[1]);
        if is_even {
            even += &sq;
            if distinct_odd {
                split += &sq;
                // two A_n classes of half the size
                alt += Integer::from(&sq / 2u32);
            } else {
                alt += &sq;
            }
        } else {
            odd += &sq;
        }
    }
    let fact_sq = Integer::from(&fact * &fact);
    let half_sq = Integer::from(&half * &half);
    ClassOracle {
        kappa: ExactQ::new(all, fact_sq.clone()).unwrap(),
        kappa_even: ExactQ::new(even, half_sq.clone()).unwrap(),
        kappa_odd: ExactQ::new(odd, half_sq.clone()).unwrap(),
        q: ExactQ::new(split, fact_sq).unwrap(),
        alt_direct: ExactQ::new(alt, half_sq).unwrap(),
    }
}

#[test]
fn partition_counts_follow_the_pentagonal_recurrence() {
    let mut p = vec![Integer::from(1)];
    for n in 1..=ENUMERATION_LIMIT as i64 {
        let mut total = Integer::new();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += &p[(n - g1) as usize] * Integer::from(sign);
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                total += &p[(n - g2) as usize] * Integer::from(sign);
            }
        }
        p.push(total);
    }
    assert_eq!(p[60], 966467);
    for n in [0u32, 1, 2, 5, 10, 25, 40, 60] {
        assert_eq!(Integer::from(partitions(n).count()), p[n as usize], "p({n})");
    }
}

#[test]
fn partition_order_is_reverse_lexicographic() {
    for n in 0..=20 {
        let mine = all_partitions(n);
        let theirs: Vec<Vec<u32>> = partitions(n).map(|p| p.parts().to_vec()).collect();
        assert_eq!(mine, theirs, "n = {n}");
        assert!(theirs.windows(2).all(|w| w[0] > w[1]));
    }
}

#[test]
fn class_sums_match_the_partition_oracle() {
    let engine = Engine::shared();
    for n in 2..=36 {
        let o = class_oracle(n);
        for method in [Method::Enumeration, Method::GeneratingFunction] {
            let v = |q| engine.value_by(q, n, method).unwrap();
            assert_eq!(v(Quantity::KappaSym), o.kappa, "kappa n={n} {method}");
            assert_eq!(v(Quantity::KappaEven), o.kappa_even, "kappa_even n={n} {method}");
            assert_eq!(v(Quantity::KappaOdd), o.kappa_odd, "kappa_odd n={n} {method}");
            assert_eq!(v(Quantity::QSplit), o.q, "q n={n} {method}");
        }
        assert_eq!(engine.kappa_alt_direct(n).unwrap(), o.alt_direct, "alt n={n}");
    }
}

/// `Σ_λ z_λ⁻²` split by sign, and the distinct-odd-parts sum, by a dynamic
/// program over part sizes.
fn dp_oracle(max: usize) -> (Vec<ExactQ>, Vec<ExactQ>, Vec<ExactQ>) {
    // by[parity][total]
    let mut by = vec![vec![ExactQ::zero(); max + 1]; 2];
    by[0][0] = ExactQ::one();
    for d in 1..=max {
        let mut next = vec![vec![ExactQ::zero(); max + 1]; 2];
        for parity in 0..2 {
            for total in 0..=max {
                if by[parity][total].is_zero() {
                    continue;
                }
                let mut weight = ExactQ::one();
                let mut m = 0;
                while total + m * d <= max {
                    let flip = ((d - 1) * m) % 2;
                    let slot = &mut next[parity ^ flip][total + m * d];
                    *slot += &by[parity][total] * &weight;
                    m += 1;
                    // (d^m m!)⁻² from (d^{m-1} (m-1)!)⁻²
                    weight = weight * ExactQ::new(1, Integer::from(d * m).pow(2)).unwrap();
                }
            }
        }
        by = next;
    }
    let mut q = vec![ExactQ::zero(); max + 1];
    q[0] = ExactQ::one();
    for d in (1..=max).step_by(2) {
        for total in (d..=max).rev() {
            let add = &q[total - d] * &ExactQ::new(1, (d * d) as u64).unwrap();
            q[total] += add;
        }
    }
    (by[0].clone(), by[1].clone(), q)
}

#[test]
fn generating_functions_match_the_dynamic_program() {
    let engine = Engine::shared();
    let max = 90;
    let (even, odd, q) = dp_oracle(max);
    for n in 2..=max as u32 {
        let i = n as usize;
        let four = ExactQ::from_int(4);
        let kappa = &even[i] + &odd[i];
        let gf = |quantity| engine.value_by(quantity, n, Method::GeneratingFunction).unwrap();
        assert_eq!(gf(Quantity::KappaSym), kappa, "n = {n}");
        assert_eq!(gf(Quantity::KappaEven), &four * &even[i], "n = {n}");
        assert_eq!(gf(Quantity::KappaOdd), &four * &odd[i], "n = {n}");
        assert_eq!(gf(Quantity::QSplit), q[i], "n = {n}");
    }
}

#[test]
fn short_cycle_probabilities_follow_the_first_cycle_recurrence() {
    let engine = Engine::shared();
    let order = engine.order() as usize;
    for k in [1u32, 2, 3, 15, 40] {
        // s(n) = (1/n) Σ_{j=1}^{min(k-1, n)} s(n - j)
        let mut s = vec![ExactQ::one()];
        for n in 1..=order {
            let top = (k as usize).saturating_sub(1).min(n);
            let sum: ExactQ = (1..=top).map(|j| s[n - j].clone()).sum();
            s.push(sum / ExactQ::from(n as u32));
        }
        for n in [0usize, 1, 5, 14, 15, 60, 150, order] {
            assert_eq!(engine.s_below(k, n as u32).unwrap(), s[n], "k = {k}, n = {n}");
        }
        let direct = s_below_series(k, 60);
        assert_eq!(direct.coefficients(), &s[..=60]);
    }
}

#[test]
fn sixty_times_s15_of_sixty() {
    let expected = ExactQ::new(
        "158929798034197186400893117108816122671".parse::<Integer>().unwrap(),
        "833175235266670978029768442202788608000".parse::<Integer>().unwrap(),
    )
    .unwrap();
    let v = ExactQ::from(60u32) * Engine::shared().s_below(15, 60).unwrap();
    assert_eq!(v, expected);
    assert!(v < "0.19076".parse().unwrap());
}

#[test]
fn formula_values_match_exhaustive_enumeration() {
    let engine = Engine::shared();
    for n in 0..=7 {
        assert!(n <= BRUTE_FORCE_LIMIT);
        for table in brute_force_table(n).unwrap() {
            let brute = &table.values[&n];
            for method in [Method::Enumeration, Method::GeneratingFunction] {
                assert_eq!(
                    &engine.value_by(table.quantity, n, method).unwrap(),
                    brute,
                    "{} at n = {n} by {method}",
                    table.quantity
                );
            }
            if table.quantity == Quantity::KappaAlt && n >= 2 {
                assert_eq!(&engine.kappa_alt_direct(n).unwrap(), brute);
            }
        }
    }
    assert_eq!(engine.kappa_alt(3).unwrap(), ExactQ::ratio(1, 3));
    assert_eq!(engine.kappa_alt(4).unwrap(), ExactQ::ratio(7, 24));
}
