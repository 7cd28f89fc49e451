use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which machine model a class is defined over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MachineKind {
    Oracle,
    Monotone,
    InfSd,
}

/// Outcome classes of Cantor space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    /// `M(X)` is total.
    #[serde(rename = "TOT")]
    Tot,
    /// `M(X)` has infinite domain.
    #[serde(rename = "INF-domain")]
    InfDomain,
    /// The monotone output `N(X)` is finite.
    #[serde(rename = "FIN-output")]
    FinOutput,
    /// The monotone output `N(X)` is infinite.
    #[serde(rename = "INF-output")]
    InfOutput,
    /// `M(X)` has cofinite domain.
    #[serde(rename = "COF-domain")]
    CofDomain,
    /// `M(X)` has computable domain.
    #[serde(rename = "COM-domain")]
    ComDomain,
    /// `X` has a prefix on which `M^∞` converges.
    #[serde(rename = "DOM-infsd")]
    DomInfSd,
    /// ... and the output there is finite.
    #[serde(rename = "FIN-infsd")]
    FinInfSd,
    /// ... and the output there is infinite.
    #[serde(rename = "INF-infsd")]
    InfInfSd,
    /// From some point on, every defined value of `M(X)` is 1.
    #[serde(rename = "COF-output")]
    CofOutput,
}

impl ClassTag {
    pub const ALL: [ClassTag; 10] = [
        ClassTag::Tot,
        ClassTag::InfDomain,
        ClassTag::FinOutput,
        ClassTag::InfOutput,
        ClassTag::CofDomain,
        ClassTag::ComDomain,
        ClassTag::DomInfSd,
        ClassTag::FinInfSd,
        ClassTag::InfInfSd,
        ClassTag::CofOutput,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::Tot => "TOT",
            ClassTag::InfDomain => "INF-domain",
            ClassTag::FinOutput => "FIN-output",
            ClassTag::InfOutput => "INF-output",
            ClassTag::CofDomain => "COF-domain",
            ClassTag::ComDomain => "COM-domain",
            ClassTag::DomInfSd => "DOM-infsd",
            ClassTag::FinInfSd => "FIN-infsd",
            ClassTag::InfInfSd => "INF-infsd",
            ClassTag::CofOutput => "COF-output",
        }
    }

    pub fn machine_kind(self) -> MachineKind {
        match self {
            ClassTag::Tot
            | ClassTag::InfDomain
            | ClassTag::CofDomain
            | ClassTag::ComDomain
            | ClassTag::CofOutput => MachineKind::Oracle,
            ClassTag::FinOutput | ClassTag::InfOutput => MachineKind::Monotone,
            ClassTag::DomInfSd | ClassTag::FinInfSd | ClassTag::InfInfSd => MachineKind::InfSd,
        }
    }

    /// Arithmetical complexity of the class.
    pub fn complexity(self) -> &'static str {
        match self {
            ClassTag::Tot | ClassTag::InfDomain | ClassTag::InfOutput => "Π⁰₂",
            ClassTag::FinOutput | ClassTag::CofOutput | ClassTag::DomInfSd => "Σ⁰₂",
            ClassTag::FinInfSd => "Σ⁰₂",
            ClassTag::InfInfSd => "Σ⁰₁(∅'') open",
            ClassTag::CofDomain | ClassTag::ComDomain => "Σ⁰₃",
        }
    }

    /// The truncated predicate used when no certificate is available.  Oracle
    /// and monotone tags evaluate it on the representative `σ0^{n_max}` of a
    /// depth-L cylinder; its verdicts are always reported as heuristic.
    pub fn heuristic_window(self) -> &'static str {
        match self {
            ClassTag::Tot => "every n < n_max is defined",
            ClassTag::InfDomain => "some n in [n_max/2, n_max) is defined",
            ClassTag::CofDomain => "every n in [n_max/2, n_max) is defined",
            ClassTag::ComDomain => "[n_max/2, n_max) is wholly defined or wholly undefined",
            ClassTag::CofOutput => "every defined value in [n_max/2, n_max) equals 1",
            ClassTag::InfOutput => "output length at least n_max",
            ClassTag::FinOutput => "output length below n_max",
            ClassTag::DomInfSd => "some prefix of σ alive at n_max",
            ClassTag::FinInfSd => "some prefix of σ alive at n_max with output shorter than n_max",
            ClassTag::InfInfSd => "some prefix of σ alive at n_max with output at least n_max",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown class tag {0:?}")]
pub struct UnknownTag(pub String);

impl FromStr for ClassTag {
    type Err = UnknownTag;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

/// A verdict on a whole cylinder `⟦σ⟧`: inside the class or disjoint from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    In,
    Out,
}

impl Verdict {
    pub fn from_bool(inside: bool) -> Self {
        if inside {
            Verdict::In
        } else {
            Verdict::Out
        }
    }
}
