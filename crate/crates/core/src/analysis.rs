//! Closed-form success/cost estimates for the identification pipeline.
//!
//! Everything here is a pure function of the model parameters: address
//! length `n`, draws per strand `N`, erasure probability `p`, payload
//! rate `beta` (payload length `L = ceil(beta * n)`), and tolerance
//! targets `eps1` (identification error) and `eps2` (coverage shortfall).
//! The Monte Carlo harness prints these columns next to the empirical
//! rates so each run doubles as a numerical check.
//!
//! Long products over near-one factors go through `ln_1p` so the values
//! stay accurate out to thousands of reads, and powers of two use `exp2`;
//! every formula stays finite for `n <= 64`, `N <= 10^4`.

/// Largest `n` the closed forms accept (far beyond anything the simulator
/// can reach; binomial tables stay well inside `f64` up to here).
pub const MAX_ANALYSIS_BITS: u32 = 64;

fn check_n(n: u32) -> f64 {
    assert!(
        (1..=MAX_ANALYSIS_BITS).contains(&n),
        "address length must be in 1..={MAX_ANALYSIS_BITS}, got {n}"
    );
    n as f64
}

fn check_draws(draws: u32) -> f64 {
    assert!(draws >= 1, "draw count must be positive");
    draws as f64
}

fn check_prob(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p) && p.is_finite(), "probability out of range: {p}");
    p
}

fn check_open_prob(p: f64, what: &str) -> f64 {
    assert!(p > 0.0 && p < 1.0 && p.is_finite(), "{what} must lie strictly in (0, 1), got {p}");
    p
}

/// Binomial coefficient C(n, k) as f64; n stays <= 64 so accumulated
/// rounding is negligible next to the probabilities it multiplies.
fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// P(exactly r of n positions erased).
fn erasure_pmf(n: u32, p: f64, r: u32) -> f64 {
    binomial(n, r) * p.powi(r as i32) * (1.0 - p).powi((n - r) as i32)
}

/// Upper bound on the probability that a given read sits in *no*
/// four-cycle of the identification graph:
/// `U = 2^(-N ((1 + p^2)^n - 1))`.
pub fn u_cycle(n: u32, draws: u32, p: f64) -> f64 {
    let nf = check_n(n);
    let big_n = check_draws(draws);
    let p = check_prob(p);
    (-big_n * ((1.0 + p * p).powf(nf) - 1.0)).exp2()
}

/// Lower bound on the probability that the identification graph contains
/// at least one cycle — equivalently, that peeling alone *fails*:
/// `1 - U / (N 2^n (1 - U))` with `U` from [`u_cycle`]. Returns `None`
/// when the expression leaves `(0, 1]` and the bound is vacuous.
pub fn cycle_prob_lower_bound(n: u32, draws: u32, p: f64) -> Option<f64> {
    let u = u_cycle(n, draws, p);
    let reads = check_draws(draws) * check_n(n).exp2();
    let bound = 1.0 - u / (reads * (1.0 - u));
    (bound > 0.0).then_some(bound)
}

/// Upper bound on the marginal probability that a given read is *faulty* —
/// consistent with some address other than its origin and payload-compatible
/// with one of that address's reads:
/// `1 - prod_{r=1}^{n} (1 - (2p - p^2)^r (1 - (1-p)^2 / 2)^L)^(N C(n,r))`.
/// Compare against the empirical fraction of faulty reads, not against a
/// per-instance event.
pub fn p_read_faulty(n: u32, payload_len: u32, draws: u32, p: f64) -> f64 {
    check_n(n);
    let big_n = check_draws(draws);
    let p = check_prob(p);
    let l = payload_len as f64;
    let pair_erase = 2.0 * p - p * p; // address bit unknown on either side
    let payload_hide = 1.0 - 0.5 * (1.0 - p) * (1.0 - p); // bit fails to distinguish
    let mut ln_keep = 0.0;
    for r in 1..=n {
        let q = pair_erase.powi(r as i32) * payload_hide.powf(l);
        ln_keep += big_n * binomial(n, r) * (-q).ln_1p();
    }
    -ln_keep.exp_m1()
}

/// Payload-rate threshold above which payload tests reliably separate
/// look-alike reads:
/// `beta_th = log2(N ((1+2p-p^2)^n - 1) / (eps1 / 2^n)^(1/N))
///            / (n (1 - log2(1+2p-p^2)))`.
pub fn beta_th(n: u32, draws: u32, p: f64, eps1: f64) -> f64 {
    beta_th_continuous(n, check_draws(draws), p, eps1)
}

/// [`beta_th`] with a real-valued draw count, for threshold curves and
/// region boundaries.
pub fn beta_th_continuous(n: u32, draws: f64, p: f64, eps1: f64) -> f64 {
    let nf = check_n(n);
    assert!(draws >= 1.0 && draws.is_finite(), "draw count must be at least 1, got {draws}");
    let p = check_open_prob(p, "erasure probability");
    check_open_prob(eps1, "eps1");
    let c = 1.0 + 2.0 * p - p * p;
    let numer = (draws * (c.powf(nf) - 1.0)).log2() + (nf - eps1.log2()) / draws;
    numer / (nf * (1.0 - c.log2()))
}

/// The real draw count minimizing [`beta_th`] in `N`: `ln(2^n / eps1)`.
pub fn beta_th_min_n(n: u32, eps1: f64) -> f64 {
    let nf = check_n(n);
    check_open_prob(eps1, "eps1");
    nf * std::f64::consts::LN_2 - eps1.ln()
}

/// Draw-count-independent ceiling on [`beta_th`]:
/// `(log2(N (1+2p-p^2)) + (1 - log2 eps1) / N) / (1 - log2(1+2p-p^2))`.
pub fn beta_th_upper_bound(draws: u32, p: f64, eps1: f64) -> f64 {
    let big_n = check_draws(draws);
    let p = check_open_prob(p, "erasure probability");
    check_open_prob(eps1, "eps1");
    let c = 1.0 + 2.0 * p - p * p;
    ((big_n * c).log2() + (1.0 - eps1.log2()) / big_n) / (1.0 - c.log2())
}

/// Draw-count threshold for near-certain unique decodability:
/// `n_th = log2(((eps2 + 2^n) / 2^n)^(1/n) - 1) / log2(p)`.
pub fn n_th(n: u32, p: f64, eps2: f64) -> f64 {
    let nf = check_n(n);
    let p = check_open_prob(p, "erasure probability");
    check_open_prob(eps2, "eps2");
    // expm1/ln_1p keep full precision: eps2/2^n is tiny and the strict
    // ordering against the sandwich bounds lives in second-order terms
    let inner = ((eps2 / nf.exp2()).ln_1p() / nf).exp_m1();
    inner.log2() / p.log2()
}

/// Elementary two-sided bounds certifying [`n_th`] grows linearly in `n`:
/// `(n + log2(n / eps2)) / log2(1/p)  <  n_th  <
///  (n + log2(n / (eps2 ln 2))) / log2(1/p)`.
/// Strict for every `n >= 4` on the swept grids (the lower bound touches
/// the value at `n = 1`).
pub fn n_th_sandwich(n: u32, p: f64, eps2: f64) -> (f64, f64) {
    let nf = check_n(n);
    let p = check_open_prob(p, "erasure probability");
    check_open_prob(eps2, "eps2");
    let inv = (1.0 / p).log2();
    let lo = (nf + (nf / eps2).log2()) / inv;
    let hi = (nf + (nf / (eps2 * std::f64::consts::LN_2)).log2()) / inv;
    (lo, hi)
}

/// Expected two-hop neighborhood size of a read with exactly `r` erased
/// address bits: `N 2^r (1 + p)^(n - r) - 1`.
pub fn expected_two_hop_given_erasures(n: u32, draws: u32, p: f64, r: u32) -> f64 {
    let nf = check_n(n);
    let big_n = check_draws(draws);
    let p = check_prob(p);
    assert!(r <= n, "erasure count {r} exceeds address length {n}");
    big_n * (r as f64).exp2() * (1.0 + p).powf(nf - r as f64) - 1.0
}

/// Unconditional expected two-hop size: `N (1 + 2p - p^2)^n - 1`.
pub fn expected_two_hop(n: u32, draws: u32, p: f64) -> f64 {
    let nf = check_n(n);
    let big_n = check_draws(draws);
    let p = check_prob(p);
    big_n * (1.0 + 2.0 * p - p * p).powf(nf) - 1.0
}

/// Naive comparison budget — every read against its whole two-hop
/// neighborhood: `U_0 = N^2 2^n (1 + 2p - p^2)^n`.
pub fn u0(n: u32, draws: u32, p: f64) -> f64 {
    let nf = check_n(n);
    let big_n = check_draws(draws);
    let p = check_prob(p);
    big_n * big_n * nf.exp2() * (1.0 + 2.0 * p - p * p).powf(nf)
}

/// Payload-rate threshold above which, with probability `1 - eps1`, no
/// faulty read survives the naive all-pairs comparison sweep:
/// `beta_0 = log2(eps1 / (2^n N^2 ((1+2p-p^2)^n - 1)))
///           / (n log2(1 - (1-p)^2 / 2))`.
pub fn beta_0(n: u32, draws: u32, p: f64, eps1: f64) -> f64 {
    beta_0_continuous(n, check_draws(draws), p, eps1)
}

/// [`beta_0`] with a real-valued draw count.
pub fn beta_0_continuous(n: u32, draws: f64, p: f64, eps1: f64) -> f64 {
    let nf = check_n(n);
    assert!(draws >= 1.0 && draws.is_finite(), "draw count must be at least 1, got {draws}");
    let p = check_open_prob(p, "erasure probability");
    check_open_prob(eps1, "eps1");
    let c = 1.0 + 2.0 * p - p * p;
    let hide = 1.0 - 0.5 * (1.0 - p) * (1.0 - p);
    let numer = (eps1 / (nf.exp2() * draws * draws * (c.powf(nf) - 1.0))).log2();
    numer / (nf * hide.log2())
}

/// Probability that the *order* of an address — the smallest candidate-set
/// size among its `N` reads — equals `order`. Only powers of two up to
/// `2^n` can occur (a read with `l` erasures has a size-`2^l` candidate
/// set); any other argument returns 0.
pub fn order_prob(n: u32, draws: u32, p: f64, order: u64) -> f64 {
    if !order.is_power_of_two() {
        return 0.0;
    }
    let l = order.trailing_zeros();
    if l > n {
        return 0.0;
    }
    min_erasures_prob(n, draws, p, l)
}

/// Probability that the minimum erasure count over `N` independent reads
/// of one address is exactly `l`: `S_l^N - S_{l+1}^N` with
/// `S_l = P(a single read has >= l erasures)`.
pub fn min_erasures_prob(n: u32, draws: u32, p: f64, l: u32) -> f64 {
    check_n(n);
    check_draws(draws);
    let p = check_prob(p);
    assert!(l <= n, "erasure count {l} exceeds address length {n}");
    let tail = |k: u32| -> f64 { (k..=n).map(|r| erasure_pmf(n, p, r)).sum() };
    let s_l: f64 = tail(l);
    let s_next: f64 = if l == n { 0.0 } else { tail(l + 1) };
    s_l.powi(draws as i32) - s_next.powi(draws as i32)
}

/// Refined comparison budget that charges each address's group resolution
/// at the two-hop size of its *cleanest* read:
/// `U_1 = sum_r 2^n P(min erasures = r) N 2^r (1 + p)^(n - r)`.
pub fn u1(n: u32, draws: u32, p: f64) -> f64 {
    let nf = check_n(n);
    let big_n = check_draws(draws);
    check_prob(p);
    (0..=n)
        .map(|r| {
            nf.exp2()
                * min_erasures_prob(n, draws, p, r)
                * big_n
                * (r as f64).exp2()
                * (1.0 + p).powf(nf - r as f64)
        })
        .sum()
}

/// Chance that all of `k` designated look-alike neighbors of an address
/// are ruled out by erasure patterns across the draws:
/// `prod_{j=1}^{k} (1 - (1 - p (1-p)^(n-1))^(N - j + 1))`.
pub fn confusable_prob(n: u32, draws: u32, p: f64, k: u32) -> f64 {
    let nf = check_n(n);
    check_draws(draws);
    let p = check_prob(p);
    assert!(k >= 1 && k <= draws, "k must lie in 1..=N, got {k}");
    let single = p * (1.0 - p).powf(nf - 1.0); // exactly the flagged bit erased
    let mut prod = 1.0;
    for j in 1..=k {
        let m = (draws - j + 1) as f64;
        prod *= -((m * (-single).ln_1p()).exp_m1());
    }
    prod
}

/// Draw count beyond which single-bit look-alikes stop dominating the
/// failure modes: `N_0 = n - 1 / log2(1 - p (1-p)^(n-1))`.
///
/// Returns `+inf` when the look-alike probability underflows `f64` (the
/// true threshold then exceeds `f64::MAX`).
pub fn n_0(n: u32, p: f64) -> f64 {
    let nf = check_n(n);
    let p = check_open_prob(p, "erasure probability");
    let single = p * (1.0 - p).powf(nf - 1.0);
    // log2(1 - single) via ln_1p: `single` can be far below f64 epsilon
    nf - std::f64::consts::LN_2 / (-single).ln_1p()
}

/// Natural-log variant of [`n_0`], reported as a sensitivity column so the
/// choice of base stays visible in the output rather than buried here.
pub fn n_0_ln(n: u32, p: f64) -> f64 {
    let nf = check_n(n);
    let p = check_open_prob(p, "erasure probability");
    let single = p * (1.0 - p).powf(nf - 1.0);
    nf - 1.0 / (-single).ln_1p()
}

/// Comparison budget for the pruner when every selection lands on an
/// already-cleanest read: `U_2 = N 2^n (1 + p)^n`.
pub fn u2(n: u32, draws: u32, p: f64) -> f64 {
    let nf = check_n(n);
    let big_n = check_draws(draws);
    let p = check_prob(p);
    big_n * nf.exp2() * (1.0 + p).powf(nf)
}

/// Envelopes for the normalized comparison count
/// `kappa = comparisons / (N 2^n)^2`, returned as `(smaller, larger)`:
/// `((1 + p) / 2)^n` from the pruned budget and `((1 + 2p - p^2) / 2)^n`
/// from the naive one.
pub fn kappa_bounds(n: u32, p: f64) -> (f64, f64) {
    let nf = check_n(n);
    let p = check_prob(p);
    let naive = ((1.0 + 2.0 * p - p * p) / 2.0).powf(nf);
    let pruned = ((1.0 + p) / 2.0).powf(nf);
    (pruned.min(naive), pruned.max(naive))
}

/// Parameter regions in the `(beta, N)` plane where the guarantees hold,
/// from loosest to tightest:
/// `R = {beta >= beta_th, N >= n_th}`,
/// `R' = {beta >= beta_0, N >= n_th}`,
/// `R'' = {beta >= beta_0, N >= n_0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// identification succeeds and the pruner's `U_2` budget applies
    RDoublePrime,
    /// identification succeeds and the `U_1` budget applies
    RPrime,
    /// identification succeeds (budget `U_0`)
    R,
    /// outside every analyzed region
    None,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::RDoublePrime => "R''",
            Region::RPrime => "R'",
            Region::R => "R",
            Region::None => "none",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The tightest region containing the point `(beta, draws)`; every
/// membership test is evaluated from its own defining inequalities
/// (boundaries inclusive), not from assumed containments.
pub fn region_membership(n: u32, draws: f64, p: f64, beta: f64, eps1: f64, eps2: f64) -> Region {
    let b_th = beta_th_continuous(n, draws.max(1.0), p, eps1);
    let b_0 = beta_0_continuous(n, draws.max(1.0), p, eps1);
    let n_th = n_th(n, p, eps2);
    let n_0 = n_0(n, p);
    if beta >= b_0 && draws >= n_0 {
        Region::RDoublePrime
    } else if beta >= b_0 && draws >= n_th {
        Region::RPrime
    } else if beta >= b_th && draws >= n_th {
        Region::R
    } else {
        Region::None
    }
}

#[cfg(test)]
// reference constants below are recorded at full precision, beyond f64's 17
// significant digits
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn u_cycle_reference_values() {
        close(u_cycle(1, 1, 0.5), 0.840896415253714543, 1e-12);
        close(u_cycle(8, 2, 0.3), 0.252590925718250786, 1e-12);
        assert_eq!(u_cycle(4, 3, 0.0), 1.0); // no erasures, no cycles
    }

    #[test]
    fn cycle_bound_reference_and_degeneracy() {
        close(cycle_prob_lower_bound(8, 2, 0.3).unwrap(), 0.999339930877521719, 1e-12);
        // two reads, U = 2^(-1/4): the expression dips below zero
        assert_eq!(cycle_prob_lower_bound(1, 1, 0.5), None);
    }

    #[test]
    fn p_faulty_reference_values() {
        // tiny case by hand: q = 0.75 * 0.875, one factor
        close(p_read_faulty(1, 1, 1, 0.5), 0.65625, 1e-15);
        close(p_read_faulty(6, 6, 2, 0.3), 0.983896387596130811, 1e-12);
        assert_eq!(p_read_faulty(5, 10, 3, 0.0), 0.0);
    }

    #[test]
    fn beta_th_reference_values() {
        close(beta_th(8, 8, 0.2, 0.01), 1.85356197451284812, 1e-12);
        close(beta_th(20, 18, 0.3, 0.01), 2.16311105623379584, 1e-12);
        assert_eq!((beta_th(8, 8, 0.2, 0.01) * 8.0).ceil() as u32, 15);
    }

    #[test]
    fn beta_th_minimum_sits_at_the_predicted_draw_count() {
        close(beta_th_min_n(20, 0.01), 18.4681137971869976, 1e-12);
        let argmin = (2..=60)
            .min_by(|&a, &b| {
                beta_th(20, a, 0.3, 0.01).partial_cmp(&beta_th(20, b, 0.3, 0.01)).unwrap()
            })
            .unwrap();
        let predicted = beta_th_min_n(20, 0.01);
        assert!(
            (argmin as f64 - predicted).abs() <= 1.0,
            "integer argmin {argmin} strays from {predicted}"
        );
    }

    #[test]
    fn beta_th_stays_below_its_upper_bound() {
        for n in 2..=40 {
            for &draws in &[1u32, 2, 5, 10, 50] {
                for &p in &[0.05, 0.2, 0.5, 0.8] {
                    for &eps1 in &[0.1, 0.01, 1e-5] {
                        let v = beta_th(n, draws, p, eps1);
                        let bound = beta_th_upper_bound(draws, p, eps1);
                        assert!(
                            v < bound,
                            "beta_th({n},{draws},{p},{eps1}) = {v} >= bound {bound}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn n_th_reference_and_sandwich() {
        let v = n_th(8, 0.2, 0.01);
        close(v, 7.59880587330255484, 1e-12);
        let (lo, hi) = n_th_sandwich(8, 0.2, 0.01);
        close(lo, 7.59879525495410966, 1e-12);
        close(hi, 7.82652253647897026, 1e-12);
        assert!(lo < v && v < hi);
        for n in 4..=30 {
            for &p in &[0.1, 0.2, 0.3, 0.4, 0.5] {
                let v = n_th(n, p, 0.01);
                let (lo, hi) = n_th_sandwich(n, p, 0.01);
                assert!(lo < v && v < hi, "sandwich failed at n={n} p={p}");
            }
        }
    }

    #[test]
    fn n_th_grows_with_address_length() {
        for n in 4..30 {
            assert!(n_th(n + 1, 0.3, 0.01) > n_th(n, 0.3, 0.01));
        }
    }

    #[test]
    fn two_hop_reference_values() {
        close(expected_two_hop(8, 3, 0.3), 80.0843114381393603, 1e-12);
        let cond = [
            23.4719216335681497,
            36.6491102252118087,
            56.9217080327843202,
            88.1103200504374157,
            136.092800078365255,
        ];
        for (r, want) in cond.iter().enumerate() {
            close(expected_two_hop_given_erasures(8, 3, 0.3, r as u32), *want, 1e-9);
        }
        // extremes pin the formula's shape
        assert_eq!(expected_two_hop_given_erasures(8, 3, 0.0, 8), 3.0 * 256.0 - 1.0);
        close(expected_two_hop_given_erasures(8, 3, 1e-12, 0), 2.0, 1e-9);
        // law of total expectation ties conditional to unconditional
        let total: f64 = (0..=8)
            .map(|r| erasure_pmf(8, 0.3, r) * expected_two_hop_given_erasures(8, 3, 0.3, r))
            .sum();
        close(total, expected_two_hop(8, 3, 0.3), 1e-12);
    }

    #[test]
    fn budget_reference_values() {
        close(u0(6, 20, 0.3), 303460.1366630656, 1e-10);
        close(u0(8, 8, 0.2), 191748.16047311136, 1e-10);
        close(u2(6, 20, 0.3), 6178.31552, 1e-12);
        close(u1(6, 20, 0.3), 6450.58755926049706, 1e-10);
        close(beta_0(6, 20, 0.3, 0.01), 10.1647416763218649, 1e-12);
        assert_eq!((beta_0(6, 20, 0.3, 0.01) * 6.0).ceil() as u32, 61);
    }

    #[test]
    fn u2_never_exceeds_u0() {
        for n in 1..=30 {
            for &draws in &[1u32, 2, 7, 100] {
                for &p in &[0.01, 0.3, 0.6, 0.99] {
                    assert!(u2(n, draws, p) <= u0(n, draws, p), "n={n} N={draws} p={p}");
                }
            }
        }
    }

    #[test]
    fn order_distribution_reference_values_and_total() {
        let want = [
            0.313051551994910449,
            0.492013004722948926,
            0.178219101987131625,
            0.016366385802186,
            0.000348647948672625,
            0.000001307156729886,
            3.87420489e-10,
        ];
        let mut total = 0.0;
        for (l, w) in want.iter().enumerate() {
            let got = min_erasures_prob(6, 3, 0.3, l as u32);
            close(got, *w, 1e-9);
            assert_eq!(order_prob(6, 3, 0.3, 1u64 << l), got);
            total += got;
        }
        close(total, 1.0, 1e-14);
        // only power-of-two candidate-set sizes occur
        assert_eq!(order_prob(6, 3, 0.3, 3), 0.0);
        assert_eq!(order_prob(6, 3, 0.3, 0), 0.0);
        assert_eq!(order_prob(6, 3, 0.3, 128), 0.0); // 2^7 > 2^n
                                                     // no erasures: order 1 with certainty
        assert_eq!(order_prob(6, 3, 0.0, 1), 1.0);
        assert_eq!(order_prob(6, 3, 0.0, 2), 0.0);
    }

    #[test]
    fn confusable_reference_values() {
        close(n_0(6, 0.3), 19.3976303751189850, 1e-12);
        close(n_0(8, 0.3), 35.7074758013217759, 1e-12);
        close(n_0_ln(6, 0.3), 25.3286949018475023, 1e-12);
        // k = 1 is the plain coverage complement
        let single: f64 = 0.3 * 0.7f64.powi(5);
        close(confusable_prob(6, 4, 0.3, 1), 1.0 - (1.0 - single).powi(4), 1e-14);
        // deeper k only shrinks the product
        assert!(confusable_prob(6, 4, 0.3, 2) < confusable_prob(6, 4, 0.3, 1));
    }

    #[test]
    fn kappa_reference_values() {
        let (lo, hi) = kappa_bounds(6, 0.3);
        close(hi, 0.185217368568765625, 1e-14);
        close(lo, 0.075418890625, 1e-14);
        // the pruned budget normalized by (N 2^n)^2 underruns even `lo`
        close(u2(6, 20, 0.3) / (20.0f64 * 64.0).powi(2), 0.00377094453125, 1e-12);
    }

    #[test]
    fn normalized_u1_stays_in_unit_interval() {
        for &draws in &[2u32, 5, 10, 20] {
            for i in 1..=19 {
                let p = i as f64 * 0.05;
                let ratio = draws as f64 * u1(30, draws, p) / u0(30, draws, p);
                assert!(ratio > 0.0 && ratio <= 1.0, "ratio {ratio} at N={draws} p={p}");
            }
        }
    }

    #[test]
    fn region_classification() {
        // boundary point of R: beta and N exactly at their thresholds
        let (n, p, eps1, eps2) = (6, 0.3, 0.01, 0.01);
        let nth = n_th(n, p, eps2);
        let bth = beta_th_continuous(n, nth, p, eps1);
        assert_eq!(region_membership(n, nth, p, bth, eps1, eps2), Region::R);
        // generous beta and draws reach the tightest region
        assert_eq!(region_membership(n, 50.0, p, 50.0, eps1, eps2), Region::RDoublePrime);
        // beta short of beta_th is outside everything
        assert_eq!(region_membership(n, nth, p, bth * 0.99, eps1, eps2), Region::None);
        // beta above beta_0 but draws between n_th and n_0 lands in R'
        let b0 = beta_0_continuous(n, 12.0, p, eps1);
        assert!(nth < 12.0 && 12.0 < n_0(n, p));
        assert_eq!(region_membership(n, 12.0, p, b0, eps1, eps2), Region::RPrime);
        assert_eq!(Region::RPrime.as_str(), "R'");
        assert_eq!(Region::RDoublePrime.to_string(), "R''");
    }

    #[test]
    fn formulas_stay_finite_on_a_stress_grid() {
        for &n in &[1u32, 8, 32, 64] {
            for &draws in &[1u32, 10, 1000, 10_000] {
                for &p in &[1e-6, 0.3, 0.99] {
                    let values = [
                        u_cycle(n, draws, p),
                        p_read_faulty(n, 4 * n, draws, p),
                        beta_th(n, draws, p, 1e-6),
                        beta_0(n, draws, p, 1e-6),
                        n_th(n, p, 1e-6),
                        expected_two_hop(n, draws, p),
                        u0(n, draws, p),
                        u1(n, draws, p),
                        u2(n, draws, p),
                        confusable_prob(n, draws, p, 1.min(draws)),
                        n_0(n, p),
                        kappa_bounds(n, p).1,
                    ];
                    for (i, v) in values.iter().enumerate() {
                        assert!(v.is_finite(), "value #{i} not finite at n={n} N={draws} p={p}");
                    }
                }
            }
        }
        // past f64 range the threshold saturates rather than going NaN
        assert!(n_0(64, 0.999_999).is_infinite());
    }

    #[test]
    #[should_panic(expected = "probability out of range")]
    fn rejects_bad_probability() {
        u0(4, 2, 1.5);
    }
}
