use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The fixed set of verifiable statements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "P1.2")]
    P1_2,
    #[serde(rename = "T2.1")]
    T2_1,
    #[serde(rename = "T2.2")]
    T2_2,
    #[serde(rename = "T2.3")]
    T2_3,
    #[serde(rename = "T2.4i")]
    T2_4i,
    #[serde(rename = "T2.4iii")]
    T2_4iii,
    #[serde(rename = "T2.4iv")]
    T2_4iv,
    #[serde(rename = "T2.6")]
    T2_6,
    #[serde(rename = "T-IgMg-1")]
    TIgMg1,
    #[serde(rename = "T-IgMg-2")]
    TIgMg2,
    #[serde(rename = "T-IgMg-3")]
    TIgMg3,
    #[serde(rename = "T2.7")]
    T2_7,
    #[serde(rename = "T3.3")]
    T3_3,
    #[serde(rename = "T3.4")]
    T3_4,
    #[serde(rename = "L4.3")]
    L4_3,
    #[serde(rename = "K-prop-instances")]
    KPropInstances,
    #[serde(rename = "Pseudo-ii-equiv")]
    PseudoIiEquiv,
}

use TheoremId::*;

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        P1_2,
        T2_1,
        T2_2,
        T2_3,
        T2_4i,
        T2_4iii,
        T2_4iv,
        T2_6,
        TIgMg1,
        TIgMg2,
        TIgMg3,
        T2_7,
        T3_3,
        T3_4,
        L4_3,
        KPropInstances,
        PseudoIiEquiv,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            P1_2 => "P1.2",
            T2_1 => "T2.1",
            T2_2 => "T2.2",
            T2_3 => "T2.3",
            T2_4i => "T2.4i",
            T2_4iii => "T2.4iii",
            T2_4iv => "T2.4iv",
            T2_6 => "T2.6",
            TIgMg1 => "T-IgMg-1",
            TIgMg2 => "T-IgMg-2",
            TIgMg3 => "T-IgMg-3",
            T2_7 => "T2.7",
            T3_3 => "T3.3",
            T3_4 => "T3.4",
            L4_3 => "L4.3",
            KPropInstances => "K-prop-instances",
            PseudoIiEquiv => "Pseudo-ii-equiv",
        }
    }

    /// The statement checked, in one line.
    pub fn statement(&self) -> &'static str {
        match self {
            P1_2 => "bounded I_g or M_g forces g in H^inf (witness |g(a)| = (1-|a|^2)|(I_g phi_a)'(a)|)",
            T2_1 => "B^1 -> Bloch: I_g, M_g iff g in H^inf; T_g iff g in Bloch",
            T2_2 => "B^p -> Bloch, p > 1: I_g iff g in H^inf; T_g iff g in Bloch_{log,1/p'}",
            T2_3 => "T_g: B^p -> Bloch iff g in Bloch_{log,1/p'}",
            T2_4i => "T_g: B^1 -> Q_s iff g in Q_s",
            T2_4iii => "T_g: B^p -> BMOA iff g in Q_{1,log,1/p'}",
            T2_4iv => "T_g: B^p -> Q_s iff g in Q_{s,log,1/p'} for p > 2, 1-2/p < s < 1",
            T2_6 => "1 < p <= 2: Q_{s,log,1/p'} necessary, Q_{s,log,alpha} with alpha > 1/2 sufficient",
            TIgMg1 => "1 < p <= 2: I_g: B^p -> Q_s iff g in H^inf; M_g sufficient condition",
            TIgMg2 => "p > 2, s > 1-2/p: I_g iff H^inf; M_g iff Q_{s,log,1/p'} and H^inf",
            TIgMg3 => "p > 2, s <= 1-2/p: I_g, M_g: B^p -> Q_s only for g = 0",
            T2_7 => "M_g: Q_s -> B^p only for g = 0",
            T3_3 => "s_1 <= s_2: T_g iff Q_{s_2,log,1}; I_g iff H^inf",
            T3_4 => "s_1 < s_2: I_g, M_g: Q_{s_2} -> Q_{s_1} only for g = 0",
            L4_3 => "multipliers into a space with the f-property have the f-property",
            KPropInstances => "Toeplitz operators with conjugate-analytic symbols: division and contraction",
            PseudoIiEquiv => "log-Q constant agrees with its pseudo-hyperbolic form",
        }
    }

    /// Parses `all` or a comma-separated list.
    pub fn parse_list(s: &str) -> Result<Vec<TheoremId>> {
        if s.trim() == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let ids = s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse()).collect::<Result<Vec<_>>>()?;
        if ids.is_empty() {
            return Err(Error::EmptyInput("theorem id list".into()));
        }
        Ok(ids)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|id| id.as_str() == s)
            .copied()
            .ok_or_else(|| Error::Registry(format!("unknown theorem id {s:?}")))
    }
}
