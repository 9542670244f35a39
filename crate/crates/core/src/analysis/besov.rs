//! Besov-ball parameters and the convergence-rate regime table.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BesovParams {
    pub s1: f64,
    pub s2: f64,
    pub p: f64,
    /// Fine index; it does not enter the exponents.
    #[serde(with = "extended_float")]
    pub q: f64,
    /// Radius of the ball.
    pub radius: f64,
}

/// Floats that may be infinite, written as the string "inf" when they are.
mod extended_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => other.parse().map_err(serde::de::Error::custom),
            },
        }
    }
}

impl BesovParams {
    pub fn new(s1: f64, s2: f64, p: f64, q: f64, radius: f64) -> Self {
        Self { s1, s2, p, q, radius }
    }

    pub fn p_prime(&self) -> f64 {
        self.p.min(2.0)
    }

    fn smoothness(&self, i: usize) -> f64 {
        if i == 1 {
            self.s1
        } else {
            self.s2
        }
    }

    /// `s_i + 1/2 - 1/p`.
    pub fn s_star(&self, i: usize) -> f64 {
        self.smoothness(i) + 0.5 - 1.0 / self.p
    }

    /// `(1/p - 1/2) / (1 - β)`.
    pub fn s_double_prime(&self, beta: f64) -> f64 {
        (1.0 / self.p - 0.5) / (1.0 - beta)
    }

    /// `s_i + 1/2 - 1/min(2, p)`.
    pub fn s_prime(&self, i: usize) -> f64 {
        self.smoothness(i) + 0.5 - 1.0 / self.p_prime()
    }

    pub fn check_hypotheses(&self) -> Result<()> {
        let need = (1.0 / self.p).max(0.5);
        if self.p < 1.0 || self.s1.min(self.s2) < need {
            return Err(Error::invalid(
                "besov",
                format!(
                    "need p >= 1 and min(s1, s2) >= max(1/p, 1/2) = {need}, got s1 = {}, s2 = {}, p = {}",
                    self.s1, self.s2, self.p
                ),
            ));
        }
        Ok(())
    }
}

/// Outcome of the regime classification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateClass {
    /// Upper-bound regime, 1 to 4.
    pub regime: u8,
    /// Exponent `d` of the upper-bound regime.
    pub exponent: f64,
    pub xi1: f64,
    pub xi2: f64,
    /// Minimum of the four lower-bound exponents.
    pub min_exponent: f64,
    pub agrees_with_min: bool,
    pub lower_regime: Option<u8>,
    pub lower_exponent: Option<f64>,
    /// Limit rules that fired and other diagnostics.
    pub notes: Vec<String>,
}

fn rate(num: f64, extra: f64) -> f64 {
    2.0 * num / (2.0 * num + extra)
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Classifies the rate regime of the hard-thresholding estimator over a Besov ball.
pub fn theoretical_exponent(bp: &BesovParams, nu: f64, beta1: f64, beta2: f64) -> Result<RateClass> {
    bp.check_hypotheses()?;
    for (name, b) in [("beta1", beta1), ("beta2", beta2)] {
        if !(0.0..1.0).contains(&b) {
            return Err(Error::invalid(name, format!("must lie in [0, 1), got {b}")));
        }
    }
    if !(nu >= 0.0) {
        return Err(Error::invalid("nu", format!("must be >= 0, got {nu}")));
    }
    let (s1, s2, p) = (bp.s1, bp.s2, bp.p);
    let (sp1, sp2) = (bp.s_prime(1), bp.s_prime(2));
    let (ss1, ss2) = (bp.s_star(1), bp.s_star(2));
    let (sdp1, sdp2) = (bp.s_double_prime(beta1), bp.s_double_prime(beta2));
    let w1 = 2.0 * nu + 1.0;
    let wb = 2.0 * nu + beta1;

    let mut notes = Vec::new();
    if beta2 == 0.0 {
        notes.push("beta2 = 0: ratios s/beta2 treated as +inf".to_string());
    }

    // Ratios against β2 are cross-multiplied so that β2 = 0 behaves as an infinite bound.
    let upper = [
        s1 > s2 * w1 && sp1 > s2 * wb && s2 > sdp2,
        sdp1 * w1 <= s1 && s1 <= s2 * w1 && beta2 * s1 < sp2 * w1,
        beta2 * sp1 < sp2 * wb && sp1 < s2 * wb && s1 < sdp1 * w1,
        beta2 * sp1 >= sp2 * wb && beta2 * s1 > sp2 * w1 && s2 <= sdp2,
    ];
    let upper_exponents = [
        rate(s2, 1.0),
        rate(s1, w1),
        rate(sp1, wb),
        if beta2 > 0.0 { rate(sp2, beta2) } else { 1.0 },
    ];
    let matches: Vec<usize> = (0..4).filter(|&i| upper[i]).collect();
    let regime = match matches.as_slice() {
        [one] => *one,
        [] => {
            return Err(Error::UnclassifiedRegime(format!(
                "no case matches for s1 = {s1}, s2 = {s2}, p = {p}, nu = {nu}, beta = ({beta1}, {beta2}); \
                 s' = ({sp1}, {sp2}), s'' = ({sdp1}, {sdp2})"
            )))
        }
        many => {
            return Err(Error::UnclassifiedRegime(format!(
                "cases {:?} overlap for s1 = {s1}, s2 = {s2}, p = {p}",
                many.iter().map(|i| i + 1).collect::<Vec<_>>()
            )))
        }
    };

    let lower = [
        s1 > s2 * w1 && ss1 > s2 * wb && s2 > sdp2,
        sdp1 * w1 <= s1 && s1 <= s2 * w1 && beta2 * s1 < ss2 * w1,
        beta2 * ss1 < ss2 * wb && ss1 < s2 * wb && s1 < sdp1 * w1,
        beta2 * ss1 > ss2 * wb && beta2 * s1 > ss2 * w1 && s2 <= sdp2,
    ];
    let lower_exponents = [
        rate(s2, 1.0),
        rate(s1, w1),
        rate(ss1, wb),
        if beta2 > 0.0 { rate(ss2, beta2) } else { 1.0 },
    ];
    let lower_match: Vec<usize> = (0..4).filter(|&i| lower[i]).collect();
    let (lower_regime, lower_exponent) = match lower_match.as_slice() {
        [one] => (Some(*one as u8 + 1), Some(lower_exponents[*one])),
        _ => {
            notes.push(format!("lower-bound cases matched: {}", lower_match.len()));
            (None, None)
        }
    };

    let min_exponent = lower_exponents.iter().copied().fold(f64::INFINITY, f64::min);
    let exponent = upper_exponents[regime];
    let agrees_with_min = same(exponent, min_exponent);
    if !agrees_with_min {
        notes.push(format!(
            "upper-bound exponent {exponent} differs from the minimum {min_exponent}"
        ));
    }
    let xi1_weight = if p < 2.0 {
        if beta1 == beta2 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0
    };
    let xi1 = xi1_weight * if same(s1, s2 * w1) { 1.0 } else { 0.0 };
    let xi2 = if same(beta2 * sp1, sp2 * wb) { 1.0 } else { 0.0 };

    Ok(RateClass {
        regime: regime as u8 + 1,
        exponent,
        xi1,
        xi2,
        min_exponent,
        agrees_with_min,
        lower_regime,
        lower_exponent,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(s1: f64, s2: f64, p: f64) -> RateClass {
        theoretical_exponent(&BesovParams::new(s1, s2, p, f64::INFINITY, 1.0), 1.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn worked_examples() {
        let a = classify(4.0, 1.0, 2.0);
        assert_eq!((a.regime, a.exponent), (1, 2.0 / 3.0));
        let b = classify(1.0, 1.0, 2.0);
        assert_eq!(b.regime, 2);
        assert!((b.exponent - 0.4).abs() < 1e-15);
        let c = classify(1.0, 2.0, 1.0);
        assert_eq!(c.regime, 3);
        assert!((c.exponent - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_sets_log_factor() {
        let a = classify(3.0, 1.0, 2.0);
        assert_eq!(a.regime, 2);
        assert_eq!(a.xi1, 1.0);
        assert!(a.agrees_with_min);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let bp = BesovParams::new(0.4, 1.0, 2.0, 2.0, 1.0);
        assert!(theoretical_exponent(&bp, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn infinite_q_round_trips() {
        let bp = BesovParams::new(1.0, 2.0, 2.0, f64::INFINITY, 1.0);
        let text = toml::to_string(&bp).unwrap();
        assert!(text.contains("\"inf\""));
        assert_eq!(toml::from_str::<BesovParams>(&text).unwrap(), bp);
    }
}
