use super::spec::lexicographic;
use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};

/// Largest number of monotone selections kept before giving up.
pub const SELECTION_LIMIT: usize = 100_000;

/// Monotone selections `(ν_{t_{-n}})` with `ν_{t_{-n}}` drawn from
/// `per_opponent[t_{-n}]` (lexicographic opponent type profiles) and
/// `ν_s <= ν_t` in the usual stochastic order whenever `s <= t`
/// componentwise.
pub fn scenario_a_priors(
    opponent_type_counts: &[usize],
    per_opponent: &[Vec<DiscreteDistribution>],
) -> Result<Vec<Vec<DiscreteDistribution>>> {
    let profiles = lexicographic(opponent_type_counts);
    if profiles.len() != per_opponent.len() {
        return Err(Error::Unsupported(format!(
            "expected {} candidate sets, one per opponent type profile, got {}",
            profiles.len(),
            per_opponent.len()
        )));
    }
    if per_opponent.iter().any(Vec::is_empty) {
        return Err(Error::Empty("candidate prior set"));
    }
    // earlier[k]: profiles before k (lexicographically) that are componentwise below it
    let earlier: Vec<Vec<usize>> = (0..profiles.len())
        .map(|k| {
            (0..k)
                .filter(|&j| profiles[j].iter().zip(&profiles[k]).all(|(a, b)| a <= b))
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; profiles.len()];
    search(per_opponent, &earlier, 0, &mut choice, &mut out)?;
    if out.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(out)
}

fn search(
    sets: &[Vec<DiscreteDistribution>],
    earlier: &[Vec<usize>],
    k: usize,
    choice: &mut Vec<usize>,
    out: &mut Vec<Vec<DiscreteDistribution>>,
) -> Result<()> {
    if k == sets.len() {
        if out.len() >= SELECTION_LIMIT {
            return Err(Error::CapExceeded {
                count: out.len() as u128 + 1,
                cap: SELECTION_LIMIT as u128,
            });
        }
        out.push(choice.iter().enumerate().map(|(j, &c)| sets[j][c].clone()).collect());
        return Ok(());
    }
    for c in 0..sets[k].len() {
        let mut ok = true;
        for &j in &earlier[k] {
            if !sets[j][choice[j]].stochastic_leq(&sets[k][c])? {
                ok = false;
                break;
            }
        }
        if ok {
            choice[k] = c;
            search(sets, earlier, k + 1, choice, out)?;
        }
    }
    Ok(())
}

/// Constant vectors `(ν, …, ν)`, one per member of `set`.
pub fn scenario_b_priors(
    opponent_profiles: usize,
    set: &[DiscreteDistribution],
) -> Vec<Vec<DiscreteDistribution>> {
    set.iter().map(|nu| vec![nu.clone(); opponent_profiles]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::SupportGrid;
    use std::sync::Arc;

    fn d(w: &[f64]) -> DiscreteDistribution {
        let g = Arc::new(SupportGrid::line((0..w.len()).map(|i| i as f64).collect()).unwrap());
        DiscreteDistribution::new(g, w.to_vec()).unwrap()
    }

    #[test]
    fn single_opponent_type_keeps_set() {
        let set = vec![d(&[0.5, 0.5]), d(&[0.2, 0.8])];
        let q = scenario_a_priors(&[1], &[set.clone()]).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q[0][0], set[0]);
        assert_eq!(q[1][0], set[1]);
    }

    #[test]
    fn ordered_singletons_give_one_selection() {
        let q = scenario_a_priors(&[2], &[vec![d(&[0.7, 0.3])], vec![d(&[0.3, 0.7])]]).unwrap();
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn unordered_singletons_fail() {
        let err = scenario_a_priors(&[2], &[vec![d(&[0.3, 0.7])], vec![d(&[0.7, 0.3])]]);
        assert!(matches!(err, Err(Error::EmptySelection)));
    }

    #[test]
    fn selections_match_brute_force() {
        let cands = [d(&[0.6, 0.4]), d(&[0.5, 0.5]), d(&[0.2, 0.8]), d(&[1.0, 0.0])];
        // two opponents with two types each: four opponent profiles
        let sets: Vec<Vec<DiscreteDistribution>> = vec![
            vec![cands[0].clone(), cands[3].clone()],
            vec![cands[1].clone(), cands[0].clone()],
            vec![cands[2].clone(), cands[1].clone()],
            vec![cands[2].clone(), cands[3].clone()],
        ];
        let got = scenario_a_priors(&[2, 2], &sets).unwrap();
        let profiles = lexicographic(&[2, 2]);
        let mut expected = Vec::new();
        for choice in lexicographic(&[2, 2, 2, 2]) {
            let sel: Vec<_> = choice.iter().enumerate().map(|(k, &c)| sets[k][c].clone()).collect();
            let mono = (0..4).all(|i| {
                (0..4).all(|j| {
                    let below = profiles[i].iter().zip(&profiles[j]).all(|(a, b)| a <= b);
                    !below || sel[i].stochastic_leq(&sel[j]).unwrap()
                })
            });
            if mono {
                expected.push(sel);
            }
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn scenario_b_is_constant() {
        let set = vec![d(&[0.5, 0.5]), d(&[0.1, 0.9]), d(&[1.0, 0.0])];
        let q = scenario_b_priors(3, &set);
        assert_eq!(q.len(), 3);
        for (v, nu) in q.iter().zip(&set) {
            assert!(v.iter().all(|x| x == nu));
        }
        assert_eq!(scenario_b_priors(2, &set[..1]).len(), 1);
    }
}
