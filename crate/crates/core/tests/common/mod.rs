//! Reference implementations that share no code with the library's
//! engines: utilities straight from the definitions, expectimax over full
//! histories, and literal enumeration of stopping rules.

#![allow(dead_code)]

use lap::model::{ProductPrior, Sequence, ValueVector};
use lap::{Rational, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn l1(v: &[Rational]) -> Rational {
    v.iter().fold(q(0, 1), |a, x| a + x.clone())
}

fn entries(v: &ValueVector<Rational>) -> Vec<Rational> {
    v.entries().to_vec()
}

/// Coordinatewise max of the history.
fn reference(history: &[Vec<Rational>]) -> Vec<Rational> {
    let mut s = history[0].clone();
    for v in &history[1..] {
        for (a, b) in s.iter_mut().zip(v) {
            if b > a {
                *a = b.clone();
            }
        }
    }
    s
}

/// ‖v‖ − λ(‖s‖ − ‖v‖), with s the coordinatewise max of `history`.
pub fn gambler_utility(history: &[Vec<Rational>], lambda: &Rational) -> Rational {
    let v = l1(history.last().expect("non-empty"));
    let s = l1(&reference(history));
    v.clone() - lambda.clone() * (s - v)
}

/// Best expected utility over every history-dependent stopping rule,
/// by expectimax on the tree of full histories. Declining at the end
/// scores −λ‖s⁽ⁿ⁾‖₁ when `allow_decline`, otherwise the last candidate
/// must be taken.
pub fn expectimax(prior: &ProductPrior<Rational>, lambda: &Rational, allow_decline: bool) -> Rational {
    fn go(
        prior: &ProductPrior<Rational>,
        lambda: &Rational,
        allow_decline: bool,
        history: &mut Vec<Vec<Rational>>,
    ) -> Option<Rational> {
        let t = history.len();
        if t == prior.n() {
            return allow_decline.then(|| -(lambda.clone() * l1(&reference(history))));
        }
        let mut total = q(0, 1);
        for atom in prior.steps()[t].atoms() {
            history.push(entries(&atom.value));
            let stop = gambler_utility(history, lambda);
            let best = match go(prior, lambda, allow_decline, history) {
                Some(cont) if cont > stop => cont,
                _ => stop,
            };
            history.pop();
            total += atom.prob.clone() * best;
        }
        Some(total)
    }
    go(prior, lambda, allow_decline, &mut Vec::new()).expect("n >= 1")
}

/// Every deterministic rule, enumerated as an accept bit per history node,
/// scored by summing over realizations. Exponential; only for tiny priors.
pub fn enumerate_rules(prior: &ProductPrior<Rational>, lambda: &Rational) -> Rational {
    // Node ids: histories of length 1..=n, numbered level by level.
    let mut level_start = vec![0usize];
    let mut width = 1usize;
    for step in prior.steps() {
        width *= step.len();
        level_start.push(level_start.last().unwrap() + width);
    }
    let total_nodes = *level_start.last().unwrap();
    assert!(total_nodes <= 20, "too many rules to enumerate");

    fn score(
        prior: &ProductPrior<Rational>,
        lambda: &Rational,
        mask: u64,
        level_start: &[usize],
        history: &mut Vec<Vec<Rational>>,
        path: usize,
    ) -> Rational {
        let t = history.len();
        if t == prior.n() {
            return -(lambda.clone() * l1(&reference(history)));
        }
        let step = &prior.steps()[t];
        let mut total = q(0, 1);
        for (i, atom) in step.atoms().iter().enumerate() {
            let node = path * step.len() + i;
            history.push(entries(&atom.value));
            let u = if mask >> (level_start[t] + node) & 1 == 1 {
                gambler_utility(history, lambda)
            } else {
                score(prior, lambda, mask, level_start, history, node)
            };
            history.pop();
            total += atom.prob.clone() * u;
        }
        total
    }

    (0u64..(1u64 << total_nodes))
        .map(|mask| score(prior, lambda, mask, &level_start, &mut Vec::new(), 0))
        .max()
        .expect("at least one rule")
}

/// E[maxₜ ‖σ⁽ᵗ⁾‖₁] by summing over all joint realizations.
pub fn brute_e_max(prior: &ProductPrior<Rational>) -> Rational {
    fn go(prior: &ProductPrior<Rational>, t: usize, best: Option<Rational>) -> Rational {
        if t == prior.n() {
            return best.expect("n >= 1");
        }
        let mut total = q(0, 1);
        for atom in prior.steps()[t].atoms() {
            let v = atom.value.l1();
            let m = match &best {
                Some(b) if b > &v => b.clone(),
                _ => v,
            };
            total += atom.prob.clone() * go(prior, t + 1, Some(m));
        }
        total
    }
    go(prior, 0, None)
}

/// Best biased utility in hindsight, declining allowed.
pub fn hindsight_biased(sigma: &Sequence<Rational>, lambda: &Rational) -> Rational {
    let rows: Vec<Vec<Rational>> = sigma.candidates().iter().map(entries).collect();
    let mut best = -(lambda.clone() * l1(&reference(&rows)));
    for t in 1..=rows.len() {
        let u = gambler_utility(&rows[..t], lambda);
        if u > best {
            best = u;
        }
    }
    best
}

/// Optimal expected value for a rational gambler by expectimax.
pub fn rational_expectimax(prior: &ProductPrior<Rational>) -> Rational {
    let mut cont: Option<Rational> = None;
    for step in prior.steps().iter().rev() {
        let mut total = q(0, 1);
        for atom in step.atoms() {
            let v = atom.value.l1();
            let best = match &cont {
                Some(c) if c > &v => c.clone(),
                _ => v,
            };
            total += atom.prob.clone() * best;
        }
        cont = Some(total);
    }
    cont.unwrap()
}

/// One realization under the expectimax-optimal rule: its probability,
/// the stop time (n+1 for declining), the value taken and the utility.
#[derive(Clone, Debug)]
pub struct OracleRun {
    pub prob: Rational,
    pub stop: usize,
    pub value: Rational,
    pub utility: Rational,
}

/// Plays the expectimax-optimal rule (declining allowed, ties accept) on
/// every realization, in odometer order.
pub fn optimal_runs(prior: &ProductPrior<Rational>, lambda: &Rational) -> Vec<OracleRun> {
    fn continuation(prior: &ProductPrior<Rational>, lambda: &Rational, history: &mut Vec<Vec<Rational>>) -> Rational {
        let t = history.len();
        if t == prior.n() {
            return -(lambda.clone() * l1(&reference(history)));
        }
        let mut total = q(0, 1);
        for atom in prior.steps()[t].atoms() {
            history.push(entries(&atom.value));
            let stop = gambler_utility(history, lambda);
            let cont = continuation(prior, lambda, history);
            history.pop();
            total += atom.prob.clone() * if cont > stop { cont } else { stop };
        }
        total
    }
    fn walk(
        prior: &ProductPrior<Rational>,
        lambda: &Rational,
        history: &mut Vec<Vec<Rational>>,
        prob: Rational,
        decided: Option<(usize, Rational, Rational)>,
        out: &mut Vec<OracleRun>,
    ) {
        let t = history.len();
        if t == prior.n() {
            let (stop, value, utility) = decided.unwrap_or_else(|| {
                (t + 1, q(0, 1), -(lambda.clone() * l1(&reference(history))))
            });
            out.push(OracleRun { prob, stop, value, utility });
            return;
        }
        for atom in prior.steps()[t].atoms() {
            history.push(entries(&atom.value));
            let next = match &decided {
                Some(d) => Some(d.clone()),
                None => {
                    let now = gambler_utility(history, lambda);
                    let cont = continuation(prior, lambda, history);
                    (now >= cont).then(|| (t + 1, atom.value.l1(), now))
                }
            };
            walk(prior, lambda, history, prob.clone() * atom.prob.clone(), next, out);
            history.pop();
        }
    }
    let mut out = Vec::new();
    walk(prior, lambda, &mut Vec::new(), q(1, 1), None, &mut out);
    out
}

/// Every joint realization as rows of entries, with its probability.
pub fn realizations(prior: &ProductPrior<Rational>) -> Vec<(Vec<Vec<Rational>>, Rational)> {
    let mut out = vec![(Vec::new(), q(1, 1))];
    for step in prior.steps() {
        let mut next = Vec::new();
        for (rows, p) in &out {
            for atom in step.atoms() {
                let mut rows: Vec<Vec<Rational>> = rows.clone();
                rows.push(entries(&atom.value));
                next.push((rows, p.clone() * atom.prob.clone()));
            }
        }
        out = next;
    }
    out
}

/// Expected utility of "take the first ‖v‖₁ ≥ T" (or > T when `strict`),
/// declining when nothing qualifies.
pub fn threshold_utility(prior: &ProductPrior<Rational>, lambda: &Rational, t: &Rational, strict: bool) -> Rational {
    let mut total = q(0, 1);
    for (rows, p) in realizations(prior) {
        let pick = rows.iter().position(|r| {
            let v = l1(r);
            if strict { &v > t } else { &v >= t }
        });
        let u = match pick {
            Some(i) => gambler_utility(&rows[..=i], lambda),
            None => -(lambda.clone() * l1(&reference(&rows))),
        };
        total += p * u;
    }
    total
}

/// Selection-probability-α threshold rule: T is the smallest support point of
/// V* with Pr[V* > T] ≤ α, and values equal to T are taken with the
/// probability that makes the total exactly α.
pub fn threshold_alpha_utility(prior: &ProductPrior<Rational>, lambda: &Rational, alpha: &Rational) -> Rational {
    let mut dist: Vec<(Rational, Rational)> = Vec::new();
    for (rows, p) in realizations(prior) {
        let m = rows.iter().map(|r| l1(r)).max().unwrap();
        match dist.iter_mut().find(|(v, _)| *v == m) {
            Some(slot) => slot.1 = slot.1.clone() + p,
            None => dist.push((m, p)),
        }
    }
    dist.sort();
    let mut above = q(1, 1);
    for (v, mass) in &dist {
        above -= mass.clone();
        if &above <= alpha {
            let p = (alpha.clone() - above) / mass.clone();
            let inclusive = threshold_utility(prior, lambda, v, false);
            let strict = threshold_utility(prior, lambda, v, true);
            return p.clone() * inclusive + (q(1, 1) - p) * strict;
        }
    }
    unreachable!()
}

/// E[Σⱼ maxₜ σ⁽ᵗ⁾ⱼ] by enumeration.
pub fn brute_e_coord_max_sum(prior: &ProductPrior<Rational>) -> Rational {
    realizations(prior)
        .into_iter()
        .fold(q(0, 1), |acc, (rows, p)| acc + p * l1(&reference(&rows)))
}
