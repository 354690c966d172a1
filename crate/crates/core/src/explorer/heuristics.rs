//! Action-selection heuristics over the valid-action mask.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::construction::ConstructionAction;
use crate::env::Action;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeuristicKind {
    Uniform,
    BiasSelectDep,
    BiasCoeff0,
}

impl HeuristicKind {
    pub fn name(self) -> &'static str {
        match self {
            HeuristicKind::Uniform => "uniform",
            HeuristicKind::BiasSelectDep => "bias_select_dep",
            HeuristicKind::BiasCoeff0 => "bias_coeff_0",
        }
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeuristicKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [HeuristicKind::Uniform, HeuristicKind::BiasSelectDep, HeuristicKind::BiasCoeff0]
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| format!("unknown heuristic `{s}` (expected uniform, bias_select_dep or bias_coeff_0)"))
    }
}

/// Probability as an exact fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Probability {
    pub numerator: u32,
    pub denominator: u32,
}

impl Probability {
    pub fn new(numerator: u32, denominator: u32) -> Result<Self, String> {
        if denominator == 0 || numerator == 0 || numerator >= denominator {
            return Err(format!("probability {numerator}/{denominator} must lie strictly between 0 and 1"));
        }
        Ok(Probability { numerator, denominator })
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl FromStr for Probability {
    type Err = String;

    /// Accepts `p/q` or a decimal with at most six fractional digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| format!("bad probability `{s}`"))?;
            let d = d.trim().parse().map_err(|_| format!("bad probability `{s}`"))?;
            return Probability::new(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if !int.trim_start_matches('0').is_empty() || frac.len() > 6 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad probability `{s}`"));
        }
        let numerator = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| format!("bad probability `{s}`"))? };
        Probability::new(numerator, 10u32.pow(frac.len() as u32))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Heuristic {
    pub kind: HeuristicKind,
    pub bias: Probability,
}

impl Heuristic {
    pub fn new(kind: HeuristicKind) -> Self {
        let bias = match kind {
            HeuristicKind::BiasCoeff0 => Probability { numerator: 9, denominator: 10 },
            _ => Probability { numerator: 7, denominator: 10 },
        };
        Heuristic { kind, bias }
    }

    pub fn with_bias(self, bias: Probability) -> Self {
        Heuristic { bias, ..self }
    }

    fn favored(&self) -> Option<Action> {
        match self.kind {
            HeuristicKind::Uniform => None,
            HeuristicKind::BiasSelectDep => Some(Action::Construction(ConstructionAction::SelectDep)),
            HeuristicKind::BiasCoeff0 => Some(Action::SelectCoeff(0)),
        }
    }

    /// Picks one of `valid` (which must be nonempty). The favored action is
    /// taken with the bias probability when valid; otherwise the choice is
    /// uniform over the other valid actions.
    pub fn choose<R: Rng + ?Sized>(&self, valid: &[Action], rng: &mut R) -> Action {
        assert!(!valid.is_empty(), "no valid action");
        if let Some(f) = self.favored().filter(|f| valid.contains(f)) {
            if rng.random_ratio(self.bias.numerator, self.bias.denominator) {
                return f;
            }
            let others: Vec<Action> = valid.iter().copied().filter(|&a| a != f).collect();
            return *others.choose(rng).unwrap_or(&f);
        }
        *valid.choose(rng).expect("nonempty")
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn probabilities() {
        assert_eq!("0.7".parse::<Probability>().unwrap(), Probability { numerator: 7, denominator: 10 });
        assert_eq!("3/4".parse::<Probability>().unwrap(), Probability { numerator: 3, denominator: 4 });
        assert!("1.0".parse::<Probability>().is_err());
        assert!("0".parse::<Probability>().is_err());
        assert!("1/0".parse::<Probability>().is_err());
        assert!("-0.5".parse::<Probability>().is_err());
    }

    #[test]
    fn biased_choice_respects_mask() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = Heuristic::new(HeuristicKind::BiasSelectDep);
        let valid = [
            Action::Construction(ConstructionAction::NextDim),
            Action::Construction(ConstructionAction::NextDep),
        ];
        for _ in 0..200 {
            assert!(valid.contains(&h.choose(&valid, &mut rng)));
        }
    }

    #[test]
    fn bias_shows_in_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = Heuristic::new(HeuristicKind::BiasCoeff0);
        let valid: Vec<Action> = (0..4).map(Action::SelectCoeff).collect();
        let zeros = (0..10_000).filter(|_| h.choose(&valid, &mut rng) == Action::SelectCoeff(0)).count();
        assert!((8_850..9_150).contains(&zeros), "{zeros}");
    }
}
